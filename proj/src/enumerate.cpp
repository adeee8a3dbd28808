#include "sievekit/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sievekit {

namespace {

enum class Mode { shortest, closest, all };

// Schnorr-Euchner style depth-first enumeration over coefficient vectors x
// with |sum_i x_i b_i - t|^2 <= radius2, from the last basis index down.
class Enumerator {
 public:
  Enumerator(const Basis& basis, Mode mode, const RealVector& target, double radius2)
      : basis_(basis),
        gs_(basis.gso()),
        mode_(mode),
        target_(target),
        radius2_(radius2),
        d_(basis.dimension()),
        x_(IntVector::Zero(d_)) {
    // Target coordinates in the Gram-Schmidt frame.
    target_gs_ = RealVector::Zero(d_);
    for (int i = 0; i < d_; ++i) target_gs_(i) = target_.dot(gs_.ortho.row(i).transpose()) / gs_.norms2(i);
  }

  void run() { descend(d_ - 1, 0.0, true); }

  std::vector<LatticeVector>& found() { return found_; }
  double best2() const { return best2_; }

 private:
  double bound2() const {
    const double r2 = mode_ == Mode::all ? radius2_ : std::min(radius2_, best2_);
    return r2 * (1.0 + kRelTol) + 1e-12;
  }

  void descend(int k, double partial2, bool zero_above) {
    double center = target_gs_(k);
    for (int j = k + 1; j < d_; ++j) center -= static_cast<double>(x_(j)) * gs_.mu(j, k);
    const double bk = gs_.norms2(k);

    // For SVP and the all-vectors mode, enumerate only one of +/- v: while
    // every higher coefficient is zero, x_k >= 0.
    const bool half = zero_above && mode_ != Mode::closest;

    const auto x0 = static_cast<std::int64_t>(std::llround(center));
    const int first_dir = center >= static_cast<double>(x0) ? 1 : -1;
    bool up_open = true, down_open = true;
    for (std::int64_t step = 0; up_open || down_open; ++step) {
      for (int side = 0; side < 2; ++side) {
        if (step == 0 && side == 1) break;
        const int dir = side == 0 ? first_dir : -first_dir;
        bool& open = dir == 1 ? up_open : down_open;
        if (!open && step > 0) continue;
        const std::int64_t x = step == 0 ? x0 : x0 + dir * step;
        const double diff = static_cast<double>(x) - center;
        const double p2 = partial2 + diff * diff * bk;
        if (p2 > bound2()) {
          if (step == 0) {
            // Both directions move further from the center than x0 did.
            up_open = down_open = false;
          } else {
            open = false;
          }
          continue;
        }
        if (half && x < 0) continue;
        x_(k) = x;
        if (k == 0) {
          leaf();
        } else {
          descend(k - 1, p2, zero_above && x == 0);
        }
      }
      if (step == 0 && !up_open && !down_open) break;
    }
    x_(k) = 0;
  }

  void leaf() {
    if (mode_ != Mode::closest && x_.isZero()) return;
    LatticeVector v = LatticeVector::from_coeffs(basis_, x_);
    const double dist2 = mode_ == Mode::closest ? (v.coords - target_).squaredNorm() : v.norm2;
    if (mode_ == Mode::all) {
      if (dist2 <= radius2_ * (1.0 + kRelTol)) found_.push_back(std::move(v));
      return;
    }
    if (dist2 < best2_ * (1.0 - kRelTol)) {
      best2_ = dist2;
      found_.clear();
      found_.push_back(std::move(v));
    } else if (dist2 <= best2_ * (1.0 + kRelTol)) {
      found_.push_back(std::move(v));
    }
  }

  const Basis& basis_;
  const GramSchmidt<double>& gs_;
  Mode mode_;
  RealVector target_;
  RealVector target_gs_;
  double radius2_;
  int d_;
  IntVector x_;
  double best2_ = std::numeric_limits<double>::infinity();
  std::vector<LatticeVector> found_;
};

void check_cap(const Basis& basis) {
  if (basis.dimension() > kOracleMaxDimension)
    throw OracleCapError("enumeration oracle refuses dimension " + std::to_string(basis.dimension()) +
                         " > " + std::to_string(kOracleMaxDimension));
}

LatticeVector pick_lex_min(std::vector<LatticeVector>& ties, bool canonicalize) {
  LatticeVector best = canonicalize ? sign_canonical(ties.front()) : ties.front();
  for (auto& v : ties) {
    LatticeVector c = canonicalize ? sign_canonical(v) : v;
    if (lex_less(c.coeffs, best.coeffs)) best = std::move(c);
  }
  return best;
}

double shortest_basis_norm2(const Basis& basis) {
  return basis.real_rows().rowwise().squaredNorm().minCoeff();
}

}  // namespace

LatticeVector enumerate_svp(const Basis& basis, std::optional<double> bound) {
  check_cap(basis);
  const RealVector origin = RealVector::Zero(basis.dimension());
  if (bound) {
    Enumerator e(basis, Mode::shortest, origin, (*bound) * (*bound));
    e.run();
    if (e.found().empty()) throw EmptyResultError("no nonzero lattice vector within the given bound");
    return pick_lex_min(e.found(), true);
  }
  // Grow the radius from the Gaussian heuristic; the shortest basis row
  // guarantees success.
  const double cap2 = shortest_basis_norm2(basis);
  double r2 = std::min(cap2, std::pow(1.1 * gaussian_heuristic_lambda1(basis).value, 2));
  for (;;) {
    Enumerator e(basis, Mode::shortest, origin, r2);
    e.run();
    if (!e.found().empty()) return pick_lex_min(e.found(), true);
    r2 = std::min(cap2, r2 * 1.44);
  }
}

LatticeVector enumerate_cvp(const Basis& basis, const TargetVector& target) {
  check_cap(basis);
  if (target.dimension() != basis.dimension()) throw std::invalid_argument("target dimension mismatch");
  const LatticeVector babai = babai_nearest_plane(basis, target);
  const double cap2 = (babai.coords - target.coords).squaredNorm();
  double r2 = std::min(cap2, std::pow(1.1 * gaussian_heuristic_lambda1(basis).value, 2));
  for (;;) {
    Enumerator e(basis, Mode::closest, target.coords, r2);
    e.run();
    if (!e.found().empty()) return pick_lex_min(e.found(), false);
    r2 = std::min(cap2, r2 * 1.44);
  }
}

std::vector<LatticeVector> enumerate_short_vectors(const Basis& basis, double radius) {
  check_cap(basis);
  Enumerator e(basis, Mode::all, RealVector::Zero(basis.dimension()), radius * radius);
  e.run();
  std::vector<LatticeVector> out;
  out.reserve(e.found().size());
  for (auto& v : e.found()) out.push_back(sign_canonical(std::move(v)));
  std::sort(out.begin(), out.end(), [](const LatticeVector& a, const LatticeVector& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return lex_less(a.coeffs, b.coeffs);
  });
  return out;
}

LatticeVector babai_nearest_plane(const Basis& basis, const TargetVector& target) {
  const auto& gs = basis.gso();
  const int d = basis.dimension();
  RealVector residual = target.coords;
  IntVector x = IntVector::Zero(d);
  for (int i = d - 1; i >= 0; --i) {
    const double c = residual.dot(gs.ortho.row(i).transpose()) / gs.norms2(i);
    x(i) = std::llround(c);
    residual -= static_cast<double>(x(i)) * basis.real_rows().row(i).transpose();
  }
  return LatticeVector::from_coeffs(basis, std::move(x));
}

Lambda1Estimate lambda1_estimate(const Basis& basis) {
  if (basis.dimension() <= kOracleMaxDimension)
    return {enumerate_svp(basis).norm(), Lambda1Source::enumerated};
  return gaussian_heuristic_lambda1(basis);
}

}  // namespace sievekit
