#include "sievekit/lsf.hpp"

#include "sievekit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace sievekit {

namespace {

constexpr double kEndpointTol = 1e-12;

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw DomainError("theta must lie in (0, pi/2), got " + std::to_string(theta));
}

void check_u(double theta, double u) {
  const double c = std::cos(theta);
  if (!(u >= c * (1.0 - kEndpointTol) && u <= (1.0 / c) * (1.0 + kEndpointTol)))
    throw DomainError("u must lie in [cos theta, 1/cos theta], got " + std::to_string(u));
}

}  // namespace

LsfParams LsfParams::make(double theta, double u, std::size_t num_filters) {
  check_theta(theta);
  check_u(theta, u);
  if (num_filters < 1) throw DomainError("num_filters must be at least 1");
  LsfParams p;
  p.theta = theta;
  p.u = u;
  p.alpha_u = std::cos(theta);
  p.alpha_q = u * p.alpha_u;
  p.num_filters = num_filters;
  return p;
}

NnsExponents compute_exponents(double theta, double u) {
  check_theta(theta);
  check_u(theta, u);
  const double c = std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  const double cot2 = c * c / s2;

  const double q_den = u * c - std::cos(2.0 * theta);
  const double u_den = 1.0 - cot2 * (u * u - 2.0 * u * c + 1.0);
  if (!(q_den > 0.0) || !(u_den > 0.0))
    throw DomainError("nonpositive denominator in filter exponents");

  NnsExponents e;
  e.rho_q = 0.5 * std::log2(s2 * (u * c + 1.0) / q_den);
  e.rho_u = 0.5 * std::log2(s2 / u_den);
  e.n_exponent = std::log2(1.0 / std::sin(theta));
  if (!std::isfinite(e.rho_q) || !std::isfinite(e.rho_u))
    throw DomainError("filter exponents are not finite");
  return e;
}

namespace {

// First two coordinates of a uniform point on S^{d-1}.
struct PlaneProjector {
  explicit PlaneProjector(int dimension)
      : rest_(dimension > 2 ? (dimension - 2) / 2.0 : 1.0, 2.0), has_rest_(dimension > 2) {}

  std::pair<double, double> operator()(Rng& rng) {
    const double g1 = normal_(rng), g2 = normal_(rng);
    const double r2 = g1 * g1 + g2 * g2 + (has_rest_ ? rest_(rng) : 0.0);
    const double inv = 1.0 / std::sqrt(r2);
    return {g1 * inv, g2 * inv};
  }

 private:
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> rest_;  // chi-square with d - 2 degrees
  bool has_rest_;
};

}  // namespace

double wedge_mass(int dimension, double angle, double alpha_u, double alpha_q,
                  std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  PlaneProjector project(dimension);
  const double cy = std::cos(angle), sy = std::sin(angle);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [a, b] = project(rng);
    if (a >= alpha_u && a * cy + b * sy >= alpha_q) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

double cap_mass(int dimension, double alpha, std::uint64_t seed, std::size_t samples) {
  Rng rng(seed);
  PlaneProjector project(dimension);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i)
    if (project(rng).first >= alpha) ++hits;
  return static_cast<double>(hits) / static_cast<double>(samples);
}

std::size_t default_num_filters(int dimension, double theta, double u) {
  const LsfParams p = LsfParams::make(theta, u, 1);
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::size_t> cache;
  const auto key = std::make_tuple(dimension, theta, u);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  // Sample in chunks until the estimate rests on enough hits.
  constexpr std::size_t chunk = 1'000'000;
  constexpr std::size_t max_samples = 200'000'000;
  constexpr double min_hits = 400.0;
  double total = 0.0;
  std::size_t n = 0;
  std::uint64_t k = 0;
  do {
    total += wedge_mass(dimension, theta, p.alpha_u, p.alpha_q, subseed(0x5eedf17e, k++), chunk) * chunk;
    n += chunk;
  } while (total < min_hits && n < max_samples);
  const double w = std::max(total, 1.0) / static_cast<double>(n);
  const auto filters = static_cast<std::size_t>(std::ceil(3.0 / w));
  std::lock_guard lock(mutex);
  cache.emplace(key, filters);
  return filters;
}

LsfIndex::LsfIndex(int dimension, const LsfParams& params, std::uint64_t rng_seed)
    : dimension_(dimension), params_(params), seed_(rng_seed) {
  if (params.num_filters < 1) throw DomainError("num_filters must be at least 1");
  if (params.num_filters > kMaxFilterEntries / static_cast<std::size_t>(std::max(dimension, 1)))
    throw ResourceCapError(std::to_string(params.num_filters) + " filters in dimension " + std::to_string(dimension) +
                           " exceed the filter memory cap");
  Rng rng(rng_seed);
  filters_.resize(static_cast<Eigen::Index>(params.num_filters), dimension);
  for (Eigen::Index f = 0; f < filters_.rows(); ++f)
    filters_.row(f) = random_unit_vector(dimension, rng).transpose();
  buckets_.resize(params.num_filters);
}

LsfIndex LsfIndex::brute_force(int dimension) {
  LsfIndex idx;
  idx.dimension_ = dimension;
  idx.brute_ = true;
  return idx;
}

void LsfIndex::place(Id id, const Eigen::Ref<const RealVector>& products) {
  Entry entry;
  for (Eigen::Index f = 0; f < products.size(); ++f) {
    if (products(f) >= params_.alpha_u) {
      buckets_[f].push_back(id);
      entry.buckets.push_back(static_cast<std::uint32_t>(f));
    }
  }
  store_.emplace(id, std::move(entry));
}

void LsfIndex::insert(Id id, const RealVector& vector) {
  if (store_.count(id)) throw std::invalid_argument("duplicate id in filter index");
  const double n = vector.norm();
  if (!(n > 0.0)) throw std::invalid_argument("cannot index the zero vector");
  if (brute_) {
    store_.emplace(id, Entry{});
    return;
  }
  const RealVector products = filters_ * (vector / n);
  place(id, products);
}

void LsfIndex::insert_batch(const std::vector<Id>& ids, const RealMatrix& vectors) {
  if (static_cast<Eigen::Index>(ids.size()) != vectors.rows())
    throw std::invalid_argument("id count does not match vector count");
  if (brute_) {
    for (std::size_t i = 0; i < ids.size(); ++i) insert(ids[i], vectors.row(i).transpose());
    return;
  }
  const Eigen::VectorXd norms = vectors.rowwise().norm();
  if ((norms.array() <= 0.0).any()) throw std::invalid_argument("cannot index the zero vector");
  const RealMatrix unit = norms.cwiseInverse().asDiagonal() * vectors;
  // Products are formed for column blocks of about 2^24 entries.
  const Eigen::Index n = unit.rows();
  const Eigen::Index block = std::max<Eigen::Index>(1, (Eigen::Index{1} << 24) / std::max<Eigen::Index>(filters_.rows(), 1));
  Eigen::MatrixXd products;
  for (Eigen::Index start = 0; start < n; start += block) {
    const Eigen::Index len = std::min(block, n - start);
    products.noalias() = filters_ * unit.middleRows(start, len).transpose();  // F x len
    for (Eigen::Index i = 0; i < len; ++i) {
      const Id id = ids[static_cast<std::size_t>(start + i)];
      if (store_.count(id)) throw std::invalid_argument("duplicate id in filter index");
      place(id, products.col(i));
    }
  }
}

void LsfIndex::remove(Id id) {
  auto it = store_.find(id);
  if (it == store_.end()) throw NotFoundError("id " + std::to_string(id) + " not in filter index");
  for (auto f : it->second.buckets) {
    auto& b = buckets_[f];
    auto pos = std::find(b.rbegin(), b.rend(), id);
    *pos = b.back();
    b.pop_back();
  }
  store_.erase(it);
}

void LsfIndex::clear() {
  store_.clear();
  for (auto& b : buckets_) b.clear();
}

std::vector<LsfIndex::Id> LsfIndex::query_candidates(const RealVector& target) const {
  std::vector<Id> out;
  if (brute_) {
    out.reserve(store_.size());
    for (const auto& [id, entry] : store_) out.push_back(id);
    return out;
  }
  const double n = target.norm();
  if (!(n > 0.0)) throw std::invalid_argument("query target must be nonzero");
  const RealVector products = filters_ * (target / n);
  for (Eigen::Index f = 0; f < products.size(); ++f)
    if (products(f) >= params_.alpha_q) out.insert(out.end(), buckets_[f].begin(), buckets_[f].end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<LsfIndex::Id> LsfIndex::query_candidates_symmetric(const RealVector& target) const {
  if (brute_) return query_candidates(target);
  auto out = query_candidates(target);
  auto neg = query_candidates(-target);
  out.insert(out.end(), neg.begin(), neg.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<std::uint32_t>& LsfIndex::buckets_of(Id id) const {
  auto it = store_.find(id);
  if (it == store_.end()) throw NotFoundError("id " + std::to_string(id) + " not in filter index");
  return it->second.buckets;
}

bool operator==(const LsfIndex& a, const LsfIndex& b) {
  if (a.dimension_ != b.dimension_ || a.brute_ != b.brute_ || a.buckets_.size() != b.buckets_.size())
    return false;
  if (a.store_.size() != b.store_.size()) return false;
  for (const auto& [id, entry] : a.store_)
    if (!b.store_.count(id)) return false;
  for (std::size_t f = 0; f < a.buckets_.size(); ++f) {
    auto x = a.buckets_[f], y = b.buckets_[f];
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return a.filters_ == b.filters_;
}

}  // namespace sievekit
