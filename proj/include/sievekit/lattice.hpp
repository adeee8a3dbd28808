#pragma once

#include "sievekit/core.hpp"

#include <array>
#include <cmath>
#include <iosfwd>
#include <numbers>
#include <string>
#include <vector>

namespace sievekit {

using Fingerprint = std::array<std::uint8_t, 32>;

std::string to_hex(const Fingerprint& fp);

/// Gram-Schmidt data of a row basis: orthogonal rows b*_i, the lower
/// triangular coefficients mu(i, j) = <b_i, b*_j> / |b*_j|^2 (unit diagonal)
/// and the squared norms |b*_i|^2.
template <typename Scalar>
struct GramSchmidt {
  Matrix<Scalar> ortho;
  Matrix<Scalar> mu;
  Vector<Scalar> norms2;

  Eigen::Index dimension() const { return ortho.rows(); }

  /// log |det B| computed from the orthogonal norms.
  Scalar log_det() const { return norms2.array().log().sum() / Scalar(2); }
};

/// Modified Gram-Schmidt over the rows of `rows`, carried out in `Scalar`.
/// Throws SingularBasisError if some b*_i vanishes relative to b_i.
template <typename Scalar = double, typename Derived>
GramSchmidt<Scalar> gram_schmidt(const Eigen::MatrixBase<Derived>& rows) {
  const Eigen::Index n = rows.rows();
  GramSchmidt<Scalar> gs;
  gs.ortho = rows.template cast<Scalar>();
  gs.mu = Matrix<Scalar>::Identity(n, n);
  gs.norms2.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector<Scalar> bi = rows.row(i).template cast<Scalar>().transpose();
    for (Eigen::Index j = 0; j < i; ++j) {
      gs.mu(i, j) = gs.ortho.row(i).dot(gs.ortho.row(j)) / gs.norms2(j);
      gs.ortho.row(i) -= gs.mu(i, j) * gs.ortho.row(j);
    }
    gs.norms2(i) = gs.ortho.row(i).squaredNorm();
    if (!(gs.norms2(i) > Scalar(1e-20) * bi.squaredNorm())) {
      throw SingularBasisError("basis is rank deficient at row " + std::to_string(i));
    }
  }
  return gs;
}

/// Square, full-rank integer basis with row vectors b_1..b_d.
class Basis {
 public:
  explicit Basis(IntMatrix rows);

  int dimension() const { return static_cast<int>(rows_.rows()); }
  const IntMatrix& rows() const { return rows_; }
  const RealMatrix& real_rows() const { return real_rows_; }
  const GramSchmidt<double>& gso() const { return gso_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }

  RealVector coords_of(const IntVector& coeffs) const {
    return real_rows_.transpose() * coeffs.cast<double>();
  }

  /// Returns a copy with every entry multiplied by `factor`.
  Basis scaled(std::int64_t factor) const;

  friend bool operator==(const Basis& a, const Basis& b) { return a.rows_ == b.rows_; }

 private:
  IntMatrix rows_;
  RealMatrix real_rows_;
  GramSchmidt<double> gso_;
  Fingerprint fingerprint_{};
};

/// Lattice vector with integral coefficients and cached coordinates.
struct LatticeVector {
  IntVector coeffs;
  RealVector coords;
  double norm2 = 0.0;

  static LatticeVector from_coeffs(const Basis& basis, IntVector coeffs);
  static LatticeVector zero(int dimension);

  double norm() const { return std::sqrt(norm2); }
  bool is_zero() const { return coeffs.isZero(); }

  /// this -= k * other, keeping coeffs, coords and norm2 consistent.
  void subtract(const LatticeVector& other, std::int64_t k = 1);

  friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
  friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b);
  LatticeVector operator-() const;
  friend bool operator==(const LatticeVector& a, const LatticeVector& b) {
    return a.coeffs == b.coeffs;
  }
};

/// Flips the sign so the first nonzero coefficient is positive.
LatticeVector sign_canonical(LatticeVector v);

/// Strict lexicographic order on coefficient vectors.
bool lex_less(const IntVector& a, const IntVector& b);

struct TargetVector {
  RealVector coords;

  TargetVector() = default;
  explicit TargetVector(RealVector c);

  int dimension() const { return static_cast<int>(coords.size()); }
};

enum class Lambda1Source : std::uint8_t { enumerated = 0, gaussian_heuristic = 1 };

struct Lambda1Estimate {
  double value = 0.0;
  Lambda1Source source = Lambda1Source::gaussian_heuristic;
};

const char* to_string(Lambda1Source source);

/// sqrt(d / (2 pi e)) * |det B|^(1/d).
Lambda1Estimate gaussian_heuristic_lambda1(const Basis& basis);

/// Goldstein-Mayer style random basis: row 1 = (p, 0, ..., 0) for a random
/// prime p in [2^10, 2^11), row i = (x_i, e_i) with x_i uniform in [0, p).
Basis random_lattice(int dimension, std::uint64_t seed);

// Text formats. Basis: integer d, then d rows of d integers; lines starting
// with '#' are comments. Target: one line of d reals.
Basis read_basis(std::istream& in);
void write_basis(std::ostream& out, const Basis& basis);
Basis load_basis_file(const std::string& path);
TargetVector read_target(std::istream& in, int dimension);
TargetVector load_target_file(const std::string& path, int dimension);
/// Every remaining target line, one target per line.
std::vector<TargetVector> read_targets(std::istream& in, int dimension);
void write_target(std::ostream& out, const TargetVector& target);

}  // namespace sievekit
