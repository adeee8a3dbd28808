#pragma once

#include "sievekit/lattice.hpp"

namespace sievekit {

/// Default Klein spread: max_i |b*_i| * sqrt(d).
double default_spread(const Basis& basis);

/// Klein-style randomized nearest-plane sampler. `spread` is the target
/// expected norm of the offset from the center; the per-coordinate Gaussian
/// width is spread / sqrt(d).
class KleinSampler {
 public:
  KleinSampler(const Basis& basis, double spread);

  /// Lattice vector distributed around `center` (zero for plain sampling).
  LatticeVector sample(Rng& rng, const RealVector& center) const;
  LatticeVector sample(Rng& rng) const;

  double spread() const { return spread_; }

 private:
  const Basis* basis_;
  double spread_;
  double sigma_;
};

/// Integer sample from the discrete Gaussian over Z with center `center`
/// and width `sigma` (density proportional to exp(-(x - c)^2 / (2 sigma^2))).
std::int64_t sample_discrete_gaussian(Rng& rng, double center, double sigma);

LatticeVector sample_lattice_vector(const Basis& basis, std::uint64_t rng_seed, double spread);

struct CosetSample {
  LatticeVector vector;
  double distance = 0.0;  // |vector - t|
};

/// Lattice vector near `target`; the same sampler as sample_lattice_vector
/// centered at t.
CosetSample sample_coset_vector(const Basis& basis, const TargetVector& target,
                                std::uint64_t rng_seed, double spread);

/// Uniformly random coset representative: sum_i u_i b*_i, u_i in [-1/2, 1/2).
TargetVector random_target(const Basis& basis, Rng& rng);

/// Uniformly random unit vector in R^d.
RealVector random_unit_vector(int dimension, Rng& rng);

}  // namespace sievekit
