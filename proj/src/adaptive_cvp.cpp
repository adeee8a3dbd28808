#include "sievekit/adaptive_cvp.hpp"

#include "sievekit/enumerate.hpp"
#include "sievekit/sampler.hpp"
#include "shortest_first.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sievekit {

namespace {

struct TargetCandidate {
  double dist2;
  std::uint32_t i;  // list_target
  std::uint32_t j;  // list_zero
  bool sum;
};

template <typename Visit>
void scan_cross(const TwoListState& state, const PairScanOptions& options, Visit&& visit) {
  const auto& lt = state.list_target.entries();
  const auto& l0 = state.list_zero.entries();
  if (lt.empty() || l0.empty()) return;
  if (options.scan == PairScan::brute) {
    for (std::size_t i = 0; i < lt.size(); ++i)
      for (std::size_t j = 0; j < l0.size(); ++j) visit(i, j);
    return;
  }
  const int d = state.target.dimension();
  const double theta = std::numbers::pi / 3;
  const std::size_t filters = options.num_filters ? options.num_filters : default_num_filters(d, theta, 1.0);
  LsfIndex index(d, LsfParams::make(theta, 1.0, filters), options.lsf_seed);
  RealMatrix vecs(static_cast<Eigen::Index>(l0.size()), d);
  std::vector<LsfIndex::Id> ids(l0.size());
  for (std::size_t j = 0; j < l0.size(); ++j) {
    vecs.row(static_cast<Eigen::Index>(j)) = l0[j].coords.transpose();
    ids[j] = j;
  }
  index.insert_batch(ids, vecs);
  for (std::size_t i = 0; i < lt.size(); ++i) {
    const RealVector offset = lt[i].coords - state.target.coords;
    // An entry sitting on the target cannot be improved.
    if (offset.squaredNorm() == 0.0) continue;
    for (auto j : index.query_candidates_symmetric(offset)) visit(i, static_cast<std::size_t>(j));
  }
}

}  // namespace

TwoListState adaptive_sieve_step(const TwoListState& state, double gamma, const PairScanOptions& options) {
  const SieveStepParams params{gamma, state.radius};
  params.validate();
  const double bound = gamma * state.radius;
  const double bound2 = bound * bound * (1.0 + kRelTol);

  TwoListState next;
  next.target = state.target;
  next.radius = bound;
  next.list_zero = nv_sieve_step(state.list_zero, params, options);

  const auto& lt = state.list_target.entries();
  const auto& l0 = state.list_zero.entries();
  std::vector<RealVector> offsets(lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i) offsets[i] = lt[i].coords - state.target.coords;

  std::vector<TargetCandidate> found;
  scan_cross(state, options, [&](std::size_t i, std::size_t j) {
    const double dot = offsets[i].dot(l0[j].coords);
    const double base = offsets[i].squaredNorm() + l0[j].norm2;
    const double diff2 = base - 2.0 * dot;
    const double sum2 = base + 2.0 * dot;
    if (diff2 <= bound2) found.push_back({diff2, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), false});
    if (sum2 <= bound2) found.push_back({sum2, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), true});
  });
  const auto less = [](const TargetCandidate& a, const TargetCandidate& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.sum < b.sum;
  };
  detail::take_shortest(found, options.cap, less, [&](const TargetCandidate& c) {
    LatticeVector v = c.sum ? lt[c.i] + l0[c.j] : lt[c.i] - l0[c.j];
    return (v.coords - state.target.coords).squaredNorm() <= bound2 && next.list_target.insert(std::move(v));
  });
  return next;
}

AdaptiveCvpResult solve_cvp_adaptive(const Basis& basis, const TargetVector& target, std::uint64_t rng_seed,
                                     const AdaptiveCvpConfig& config) {
  const int d = basis.dimension();
  if (target.dimension() != d) throw DomainError("target dimension does not match the basis");
  if (!(config.gamma > 0.0 && config.gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");

  AdaptiveCvpResult result;
  result.lambda1 = lambda1_estimate(basis);
  const double gh = gaussian_heuristic_lambda1(basis).value;
  const auto n =
      static_cast<std::size_t>(std::ceil(std::exp2(config.initial_list_exponent * d + config.initial_list_offset)));

  Rng rng(rng_seed);
  KleinSampler sampler(basis, std::exp2(config.spread_exponent * d) * gh);
  TwoListState state;
  state.target = target;
  for (std::size_t a = 0; state.list_zero.size() < n && a < 20 * n; ++a) state.list_zero.insert(sampler.sample(rng));
  for (std::size_t a = 0; state.list_target.size() < n && a < 20 * n; ++a)
    state.list_target.insert(sampler.sample(rng, target.coords));
  if (state.list_zero.empty() || state.list_target.empty())
    throw TargetStarvationError("sampler produced no usable initial vectors", {});

  double max_dist = 0.0;
  result.closest = state.list_target[0];
  result.distance = state.distance(result.closest);
  for (const auto& v : state.list_target) {
    const double dist = state.distance(v);
    max_dist = std::max(max_dist, dist);
    if (dist < result.distance) {
      result.closest = v;
      result.distance = dist;
    }
  }
  state.radius = config.initial_radius_factor * std::max(state.list_zero.max_norm(), max_dist);
  result.initial_size = n;
  result.peak_zero_size = state.list_zero.size();
  result.peak_target_size = state.list_target.size();

  const double stop = std::sqrt(4.0 / 3.0) * result.lambda1.value * config.stop_slack;
  PairScanOptions scan = config.pair_scan;
  scan.cap = n;
  for (int it = 1; state.radius > stop; ++it) {
    scan.lsf_seed = subseed(rng_seed, static_cast<std::uint64_t>(it));
    state = adaptive_sieve_step(state, config.gamma, scan);
    for (const auto& v : state.list_target) {
      const double dist = state.distance(v);
      if (dist < result.distance) {
        result.closest = v;
        result.distance = dist;
      }
    }
    AdaptiveIterationRecord rec{it, state.list_zero.size(), state.list_target.size(), state.radius, result.distance};
    result.trace.push_back(rec);
    if (config.progress) config.progress(rec);
    result.peak_zero_size = std::max(result.peak_zero_size, state.list_zero.size());
    result.peak_target_size = std::max(result.peak_target_size, state.list_target.size());
    if (state.list_target.empty()) {
      // Near the floor the lists thin out on their own; only an early
      // collapse is an error.
      if (state.radius > config.starvation_factor * stop)
        throw TargetStarvationError("target list emptied at radius " + std::to_string(state.radius) + " above " +
                                        std::to_string(config.starvation_factor * stop),
                                    result.trace);
      break;
    }
  }
  return result;
}

}  // namespace sievekit
