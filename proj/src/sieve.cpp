#include "sievekit/sieve.hpp"

#include "sievekit/sampler.hpp"
#include "shortest_first.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

namespace sievekit {

std::size_t CoeffHash::operator()(const IntVector& v) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

IntVector SieveList::key(const LatticeVector& v) const {
  if (dedupe_ == Dedupe::exact) return v.coeffs;
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) {
    if (v.coeffs(i) > 0) return v.coeffs;
    if (v.coeffs(i) < 0) return -v.coeffs;
  }
  return v.coeffs;
}

bool SieveList::insert(LatticeVector v) {
  if (dedupe_ == Dedupe::sign && v.is_zero()) return false;
  if (!keys_.insert(key(v)).second) return false;
  entries_.push_back(std::move(v));
  return true;
}

bool SieveList::contains(const LatticeVector& v) const { return keys_.count(key(v)) != 0; }

const LatticeVector& SieveList::shortest() const {
  if (entries_.empty()) throw std::logic_error("shortest() on an empty list");
  return *std::min_element(entries_.begin(), entries_.end(),
                           [](const auto& a, const auto& b) { return a.norm2 < b.norm2; });
}

double SieveList::max_norm() const {
  double m = 0.0;
  for (const auto& v : entries_) m = std::max(m, v.norm2);
  return std::sqrt(m);
}

void SieveList::clear() {
  entries_.clear();
  keys_.clear();
}

const char* to_string(PairScan scan) { return scan == PairScan::brute ? "brute" : "lsf"; }

void SieveStepParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0, 1)");
  if (!(max_norm > 0.0)) throw DomainError("sieve radius must be positive");
}

namespace {

struct PairCandidate {
  double norm2;
  std::uint32_t i;
  std::uint32_t j;
  bool sum;  // w_i + w_j instead of w_i - w_j
};

// Collects i < j pairs whose sum or difference has squared norm <= bound2.
template <typename Visit>
void scan_pairs(const std::vector<LatticeVector>& entries, const PairScanOptions& options, Visit&& visit) {
  const std::size_t n = entries.size();
  if (n < 2) return;
  if (options.scan == PairScan::brute) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    return;
  }
  const int d = static_cast<int>(entries.front().coords.size());
  const double theta = std::numbers::pi / 3;
  const std::size_t filters = options.num_filters ? options.num_filters : default_num_filters(d, theta, 1.0);
  LsfIndex index(d, LsfParams::make(theta, 1.0, filters), options.lsf_seed);
  RealMatrix vecs(static_cast<Eigen::Index>(n), d);
  std::vector<LsfIndex::Id> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    vecs.row(static_cast<Eigen::Index>(i)) = entries[i].coords.transpose();
    ids[i] = i;
  }
  index.insert_batch(ids, vecs);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : index.query_candidates_symmetric(entries[i].coords))
      if (j > i) visit(i, static_cast<std::size_t>(j));
}

}  // namespace

SieveList nv_sieve_step(const SieveList& list, const SieveStepParams& params, const PairScanOptions& options) {
  params.validate();
  const double bound = params.gamma * params.max_norm;
  const double bound2 = bound * bound * (1.0 + kRelTol);
  const auto& entries = list.entries();

  std::vector<PairCandidate> found;
  scan_pairs(entries, options, [&](std::size_t i, std::size_t j) {
    const double dot = entries[i].coords.dot(entries[j].coords);
    const double base = entries[i].norm2 + entries[j].norm2;
    const double diff2 = base - 2.0 * dot;
    const double sum2 = base + 2.0 * dot;
    if (diff2 <= bound2) found.push_back({diff2, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), false});
    if (sum2 <= bound2) found.push_back({sum2, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), true});
  });
  SieveList out(list.dedupe());
  const auto less = [](const PairCandidate& a, const PairCandidate& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.sum < b.sum;
  };
  detail::take_shortest(found, options.cap, less, [&](const PairCandidate& c) {
    LatticeVector v = c.sum ? entries[c.i] + entries[c.j] : entries[c.i] - entries[c.j];
    // Recheck on the exact recomputed norm.
    return v.norm2 <= bound2 && out.insert(std::move(v));
  });
  return out;
}

NvSieveResult run_nv_sieve(const Basis& basis, const NvSieveConfig& config, std::uint64_t rng_seed) {
  const double min_exponent = std::log2(std::sqrt(4.0 / 3.0));
  if (config.initial_list_exponent < min_exponent - 1e-12)
    throw DomainError("initial list exponent must be at least log2 sqrt(4/3)");
  const int d = basis.dimension();
  const double gh = gaussian_heuristic_lambda1(basis).value;
  const auto target_size =
      static_cast<std::size_t>(std::ceil(std::exp2(config.initial_list_exponent * d + config.initial_list_offset)));

  Rng rng(rng_seed);
  KleinSampler sampler(basis, std::exp2(config.spread_exponent * d) * gh);
  SieveList list;
  for (std::size_t attempts = 0; list.size() < target_size && attempts < 20 * target_size; ++attempts)
    list.insert(sampler.sample(rng));
  if (list.empty()) throw StarvationError("sampler produced no nonzero vectors", {});

  NvSieveResult result;
  result.initial_size = list.size();
  result.peak_size = list.size();
  result.shortest = list.shortest();
  double radius = list.max_norm();

  PairScanOptions scan = config.pair_scan;
  scan.cap = target_size;
  const double floor = 1.5 * std::sqrt(4.0 / 3.0) * gh;

  for (int it = 1;; ++it) {
    scan.lsf_seed = subseed(rng_seed, static_cast<std::uint64_t>(it));
    SieveList next = nv_sieve_step(list, {config.gamma, radius}, scan);
    NvIterationRecord rec{it, next.size(), config.gamma * radius, next.empty() ? 0.0 : next.shortest().norm()};
    result.trace.push_back(rec);
    if (config.progress) config.progress(rec);
    if (next.empty()) {
      if (radius > floor) {
        throw StarvationError("list emptied at radius " + std::to_string(radius) + " above " +
                                  std::to_string(floor),
                              result.trace);
      }
      break;
    }
    if (next.shortest().norm2 < result.shortest.norm2) result.shortest = next.shortest();
    result.peak_size = std::max(result.peak_size, next.size());
    radius = next.max_norm();
    list = std::move(next);
  }
  result.list = std::move(list);
  return result;
}

std::size_t TerminationRule::sample_budget(int dimension) const {
  if (max_samples) return *max_samples;
  return static_cast<std::size_t>(std::ceil(std::exp2(sample_exponent * dimension + sample_offset)));
}

double reduction_threshold(double alpha) {
  if (!(alpha >= 1.0)) throw DomainError("reduction_threshold requires alpha >= 1");
  return 2.0 - (2.0 / alpha) * std::sqrt(alpha * alpha - 1.0);
}

namespace {

// List storage for the Gauss sieves with an optional filter index.
class GaussList {
 public:
  GaussList(int dimension, const GaussSieveOptions& options, double theta, std::uint64_t seed)
      : index_(options.scan == PairScan::lsf
                   ? LsfIndex(dimension,
                              LsfParams::make(theta, options.lsf_u,
                                              options.num_filters ? options.num_filters
                                                                  : default_num_filters(dimension, theta,
                                                                                        options.lsf_u)),
                              seed)
                   : LsfIndex::brute_force(dimension)),
        lsf_(options.scan == PairScan::lsf) {}

  std::size_t size() const { return vecs_.size(); }
  const LatticeVector& at(std::size_t pos) const { return vecs_[pos]; }
  const std::vector<LatticeVector>& vectors() const { return vecs_; }

  void candidates(const LatticeVector& v, std::vector<std::size_t>& out) const {
    out.clear();
    if (!lsf_) {
      out.resize(vecs_.size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
      return;
    }
    for (auto id : index_.query_candidates_symmetric(v.coords)) out.push_back(pos_.at(id));
    std::sort(out.begin(), out.end());
  }

  void add(LatticeVector v) {
    const auto id = next_id_++;
    if (lsf_) {
      index_.insert(id, v.coords);
      pos_.emplace(id, vecs_.size());
    }
    vecs_.push_back(std::move(v));
    ids_.push_back(id);
  }

  // Removes the given positions (ascending, unique) and returns the vectors.
  void remove(const std::vector<std::size_t>& positions) {
    for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
      const std::size_t p = *it;
      if (lsf_) {
        index_.remove(ids_[p]);
        pos_.erase(ids_[p]);
      }
      if (p + 1 != vecs_.size()) {
        vecs_[p] = std::move(vecs_.back());
        ids_[p] = ids_.back();
        if (lsf_) pos_[ids_[p]] = p;
      }
      vecs_.pop_back();
      ids_.pop_back();
    }
  }

 private:
  LsfIndex index_;
  bool lsf_;
  std::vector<LatticeVector> vecs_;
  std::vector<LsfIndex::Id> ids_;
  std::unordered_map<LsfIndex::Id, std::size_t> pos_;
  LsfIndex::Id next_id_ = 0;
};

// Best multiple k of `w` to subtract from `v`, or 0 if the result does not
// satisfy |v - k w|^2 <= c |v|^2 with slack.
std::int64_t reducing_multiple(double v2, double w2, double dot, double c) {
  if (!(w2 > 0.0) || !(v2 > 0.0)) return 0;
  const double k = std::nearbyint(dot / w2);
  if (k == 0.0) return 0;
  const double new2 = v2 - 2.0 * k * dot + k * k * w2;
  return new2 <= c * v2 * (1.0 - kRelTol) ? static_cast<std::int64_t>(k) : 0;
}

GaussSieveResult gauss_core(const Basis& basis, double alpha0, const TerminationRule& termination,
                            std::uint64_t rng_seed, const GaussSieveOptions& options) {
  const int d = basis.dimension();
  const double c = reduction_threshold(alpha0);
  const double theta = std::asin(1.0 / alpha0);
  const double spread =
      options.spread > 0.0 ? options.spread : std::exp2(0.1 * d) * gaussian_heuristic_lambda1(basis).value;
  const std::size_t budget = termination.sample_budget(d);

  Rng rng(rng_seed);
  KleinSampler sampler(basis, spread);
  GaussList list(d, options, theta, subseed(rng_seed, 0xF117E5));
  std::vector<LatticeVector> stack;
  std::vector<std::size_t> cand, removed;
  GaussSieveStats st;

  for (;;) {
    const double needed =
        std::max(static_cast<double>(termination.min_collisions), termination.collision_fraction * list.size());
    if (static_cast<double>(st.collisions) >= needed) {
      st.certified = true;
      break;
    }
    if (stack.empty() && st.samples >= budget) break;

    LatticeVector v;
    if (stack.empty()) {
      v = sampler.sample(rng);
      ++st.samples;
    } else {
      v = std::move(stack.back());
      stack.pop_back();
    }
    ++st.iterations;
    if (options.progress && options.progress_every && st.iterations % options.progress_every == 0) {
      double m2 = 0.0;
      if (list.size()) {
        m2 = list.at(0).norm2;
        for (const auto& w : list.vectors()) m2 = std::min(m2, w.norm2);
      }
      options.progress({st.iterations, list.size(), std::sqrt(m2), st.collisions});
    }
    if (v.is_zero()) {
      ++st.collisions;
      continue;
    }

    bool changed = false;
    removed.clear();
    list.candidates(v, cand);
    for (auto pos : cand) {
      const LatticeVector& w = list.at(pos);
      double dot = v.coords.dot(w.coords);
      if (const auto k = reducing_multiple(v.norm2, w.norm2, dot, c)) {
        v.subtract(w, k);
        ++st.reductions;
        changed = true;
        if (v.is_zero()) break;
        dot = v.coords.dot(w.coords);
      }
      if (const auto k = reducing_multiple(w.norm2, v.norm2, dot, c)) {
        LatticeVector w2 = w;
        w2.subtract(v, k);
        ++st.reductions;
        removed.push_back(pos);
        if (w2.is_zero()) {
          ++st.collisions;
        } else {
          stack.push_back(std::move(w2));
        }
      }
    }
    list.remove(removed);
    if (v.is_zero()) {
      ++st.collisions;
    } else if (changed) {
      stack.push_back(std::move(v));
    } else {
      list.add(std::move(v));
      st.peak_list_size = std::max(st.peak_list_size, list.size());
    }
  }

  GaussSieveResult result;
  result.alpha0 = alpha0;
  result.threshold = c;
  result.stats = st;
  for (const auto& w : list.vectors()) result.list.insert(w);
  result.shortest = result.list.empty() ? LatticeVector::zero(d) : result.list.shortest();
  return result;
}

}  // namespace

GaussSieveResult gauss_sieve(const Basis& basis, const TerminationRule& termination, std::uint64_t rng_seed,
                             const GaussSieveOptions& options) {
  return gauss_core(basis, std::sqrt(4.0 / 3.0), termination, rng_seed, options);
}

GaussSieveResult relaxed_gauss_sieve(const Basis& basis, double alpha, const TerminationRule& termination,
                                     std::uint64_t rng_seed, const GaussSieveOptions& options) {
  if (!(alpha >= 1.0)) throw DomainError("relaxed_gauss_sieve requires alpha >= 1");
  return gauss_core(basis, std::max(alpha, std::sqrt(4.0 / 3.0)), termination, rng_seed, options);
}

bool is_pairwise_reduced(const SieveList& list, double threshold) {
  const auto& e = list.entries();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      const double dot = e[i].coords.dot(e[j].coords);
      const double base = e[i].norm2 + e[j].norm2;
      const double limit = threshold * e[i].norm2 * (1.0 - kRelTol);
      if (base - 2.0 * dot <= limit || base + 2.0 * dot <= limit) return false;
    }
  }
  return true;
}

}  // namespace sievekit
