#pragma once

#include <doctest.h>

#include "sievekit/lattice.hpp"
#include "sievekit/sieve.hpp"

#include <functional>
#include <vector>

namespace support {

using namespace sievekit;

/// coords = B^T coeffs and norm2 = |coords|^2 up to relative 1e-9.
inline bool consistent(const Basis& basis, const LatticeVector& v) {
  const RealVector coords = basis.real_rows().transpose() * v.coeffs.cast<double>();
  const double scale = std::max(1.0, coords.norm());
  return (coords - v.coords).norm() <= 1e-9 * scale &&
         std::abs(coords.squaredNorm() - v.norm2) <= 1e-9 * scale * scale;
}

/// Calls fn(coeffs) for every coefficient vector c with |c B - center| <= radius.
/// Coefficients are boxed by |c_i - c0_i| <= radius * |column i of B^-1|,
/// where c0 = center B^-1, so no vector in the ball is missed.
inline void for_each_in_ball(const Basis& basis, const RealVector& center, double radius,
                             const std::function<void(const IntVector&)>& fn) {
  const int d = basis.dimension();
  const RealMatrix inv = basis.real_rows().inverse();
  const RealVector c0 = inv.transpose() * center;
  std::vector<std::int64_t> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    const double w = radius * inv.col(i).norm();
    lo[i] = static_cast<std::int64_t>(std::ceil(c0(i) - w - 1e-9));
    hi[i] = static_cast<std::int64_t>(std::floor(c0(i) + w + 1e-9));
  }
  IntVector c(d);
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      const RealVector x = basis.real_rows().transpose() * c.cast<double>();
      if ((x - center).norm() <= radius * (1 + 1e-9)) fn(c);
      return;
    }
    for (std::int64_t k = lo[i]; k <= hi[i]; ++k) {
      c(i) = k;
      rec(i + 1);
    }
  };
  rec(0);
}

/// Shortest nonzero norm by exhaustive search in the ball of radius
/// min_i |b_i|.
inline double brute_lambda1(const Basis& basis) {
  double r = basis.real_rows().rowwise().norm().minCoeff();
  double best = r;
  for_each_in_ball(basis, RealVector::Zero(basis.dimension()), r, [&](const IntVector& c) {
    if (!c.isZero()) best = std::min(best, LatticeVector::from_coeffs(basis, c).norm());
  });
  return best;
}

/// Distance from t to the lattice by exhaustive search around Babai rounding.
inline double brute_distance(const Basis& basis, const RealVector& t, double upper) {
  double best = upper;
  for_each_in_ball(basis, t, upper, [&](const IntVector& c) {
    best = std::min(best, (LatticeVector::from_coeffs(basis, c).coords - t).norm());
  });
  return best;
}

/// Every w1 - w2 and w1 + w2 over ordered pairs of the symmetric list with
/// norm <= bound, zero excluded, sign canonical and deduplicated.
inline std::vector<IntVector> brute_pair_outputs(const SieveList& list, double bound) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < list.size(); ++i)
    for (std::size_t j = 0; j < list.size(); ++j) {
      if (i == j) continue;
      for (int s : {-1, 1}) {
        LatticeVector v = list[i];
        v.subtract(list[j], -s);
        if (v.is_zero() || v.norm() > bound * (1 + kRelTol)) continue;
        out.push_back(sign_canonical(v).coeffs);
      }
    }
  std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) { return lex_less(a, b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<IntVector> sorted_keys(const SieveList& list) {
  std::vector<IntVector> out;
  for (const auto& v : list) out.push_back(list.dedupe() == SieveList::Dedupe::sign ? sign_canonical(v).coeffs : v.coeffs);
  std::sort(out.begin(), out.end(), [](const IntVector& a, const IntVector& b) { return lex_less(a, b); });
  return out;
}

inline IntVector iv(std::initializer_list<std::int64_t> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

}  // namespace support
