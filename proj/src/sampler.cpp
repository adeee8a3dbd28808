#include "sievekit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sievekit {

double default_spread(const Basis& basis) {
  return std::sqrt(basis.gso().norms2.maxCoeff()) * std::sqrt(static_cast<double>(basis.dimension()));
}

std::int64_t sample_discrete_gaussian(Rng& rng, double center, double sigma) {
  // Below this width the mass concentrates on the nearest integer.
  if (sigma < 1e-3) return std::llround(center);
  constexpr double tail = 8.0;
  const auto lo = static_cast<std::int64_t>(std::floor(center - tail * sigma));
  const auto hi = static_cast<std::int64_t>(std::ceil(center + tail * sigma));
  if (hi - lo < 64) {
    // Narrow support: exact weights, shifted by the largest log weight.
    std::vector<double> logw;
    for (std::int64_t x = lo; x <= hi; ++x) {
      const double z = (static_cast<double>(x) - center) / sigma;
      logw.push_back(-0.5 * z * z);
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    for (auto& w : logw) w = std::exp(w - top);
    std::discrete_distribution<std::size_t> pick(logw.begin(), logw.end());
    return lo + static_cast<std::int64_t>(pick(rng));
  }
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  std::uniform_real_distribution<double> accept(0.0, 1.0);
  for (;;) {
    const std::int64_t x = pick(rng);
    const double z = (static_cast<double>(x) - center) / sigma;
    if (accept(rng) < std::exp(-0.5 * z * z)) return x;
  }
}

KleinSampler::KleinSampler(const Basis& basis, double spread)
    : basis_(&basis), spread_(spread), sigma_(spread / std::sqrt(static_cast<double>(basis.dimension()))) {
  if (!(spread > 0.0)) throw DomainError("sampler spread must be positive");
}

LatticeVector KleinSampler::sample(Rng& rng, const RealVector& center) const {
  const auto& gs = basis_->gso();
  const int d = basis_->dimension();
  RealVector residual = center;
  IntVector x = IntVector::Zero(d);
  for (int i = d - 1; i >= 0; --i) {
    const double bstar = std::sqrt(gs.norms2(i));
    const double c = residual.dot(gs.ortho.row(i).transpose()) / gs.norms2(i);
    x(i) = sample_discrete_gaussian(rng, c, sigma_ / bstar);
    residual -= static_cast<double>(x(i)) * basis_->real_rows().row(i).transpose();
  }
  return LatticeVector::from_coeffs(*basis_, std::move(x));
}

LatticeVector KleinSampler::sample(Rng& rng) const {
  return sample(rng, RealVector::Zero(basis_->dimension()));
}

LatticeVector sample_lattice_vector(const Basis& basis, std::uint64_t rng_seed, double spread) {
  Rng rng(rng_seed);
  return KleinSampler(basis, spread).sample(rng);
}

CosetSample sample_coset_vector(const Basis& basis, const TargetVector& target,
                                std::uint64_t rng_seed, double spread) {
  Rng rng(rng_seed);
  CosetSample s;
  s.vector = KleinSampler(basis, spread).sample(rng, target.coords);
  s.distance = (s.vector.coords - target.coords).norm();
  return s;
}

TargetVector random_target(const Basis& basis, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const auto& gs = basis.gso();
  RealVector t = RealVector::Zero(basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) t += u(rng) * gs.ortho.row(i).transpose();
  return TargetVector(std::move(t));
}

RealVector random_unit_vector(int dimension, Rng& rng) {
  std::normal_distribution<double> g;
  RealVector v(dimension);
  do {
    for (int i = 0; i < dimension; ++i) v(i) = g(rng);
  } while (v.squaredNorm() == 0.0);
  return v.normalized();
}

}  // namespace sievekit
