#include "sievekit/lattice.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sievekit {

namespace {

Fingerprint sha256_of_rows(const IntMatrix& rows) {
  // Canonical form: d as 8 bytes little endian, then row-major entries as
  // 8-byte little-endian two's complement.
  std::string bytes;
  auto put = [&bytes](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((x >> (8 * i)) & 0xFF));
  };
  put(static_cast<std::uint64_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < rows.cols(); ++j) put(static_cast<std::uint64_t>(rows(i, j)));

  Fingerprint out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return out;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

// Next non-comment, non-blank line.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

std::string to_hex(const Fingerprint& fp) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (auto byte : fp) {
    s.push_back(digits[byte >> 4]);
    s.push_back(digits[byte & 0xF]);
  }
  return s;
}

Basis::Basis(IntMatrix rows) : rows_(std::move(rows)) {
  if (rows_.rows() != rows_.cols()) throw std::invalid_argument("basis must be square");
  if (rows_.rows() < 2) throw std::invalid_argument("basis dimension must be at least 2");
  real_rows_ = rows_.cast<double>();
  gso_ = gram_schmidt<double>(rows_);
  fingerprint_ = sha256_of_rows(rows_);
}

Basis Basis::scaled(std::int64_t factor) const { return Basis(rows_ * factor); }

LatticeVector LatticeVector::from_coeffs(const Basis& basis, IntVector coeffs) {
  LatticeVector v;
  v.coords = basis.coords_of(coeffs);
  v.coeffs = std::move(coeffs);
  v.norm2 = v.coords.squaredNorm();
  return v;
}

LatticeVector LatticeVector::zero(int dimension) {
  LatticeVector v;
  v.coeffs = IntVector::Zero(dimension);
  v.coords = RealVector::Zero(dimension);
  return v;
}

void LatticeVector::subtract(const LatticeVector& other, std::int64_t k) {
  coeffs -= k * other.coeffs;
  coords -= static_cast<double>(k) * other.coords;
  norm2 = coords.squaredNorm();
}

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r = a;
  r.subtract(b);
  return r;
}

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
  LatticeVector r = a;
  r.subtract(b, -1);
  return r;
}

LatticeVector LatticeVector::operator-() const {
  LatticeVector r = *this;
  r.coeffs = -r.coeffs;
  r.coords = -r.coords;
  return r;
}

LatticeVector sign_canonical(LatticeVector v) {
  for (Eigen::Index i = 0; i < v.coeffs.size(); ++i) {
    if (v.coeffs(i) > 0) return v;
    if (v.coeffs(i) < 0) return -v;
  }
  return v;
}

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

TargetVector::TargetVector(RealVector c) : coords(std::move(c)) {
  if (!coords.allFinite()) throw std::invalid_argument("target has non-finite entries");
}

const char* to_string(Lambda1Source source) {
  return source == Lambda1Source::enumerated ? "enumerated" : "gaussian-heuristic";
}

Lambda1Estimate gaussian_heuristic_lambda1(const Basis& basis) {
  const double d = basis.dimension();
  const double log_det = basis.gso().log_det();
  const double value =
      std::sqrt(d / (2.0 * std::numbers::pi * std::numbers::e)) * std::exp(log_det / d);
  return {value, Lambda1Source::gaussian_heuristic};
}

Basis random_lattice(int dimension, std::uint64_t seed) {
  if (dimension < 2 || dimension > 60)
    throw std::out_of_range("random_lattice dimension must lie in [2, 60]");
  Rng rng(seed);
  std::uniform_int_distribution<std::int64_t> prime_dist(1 << 10, (1 << 11) - 1);
  std::int64_t p = prime_dist(rng);
  while (!is_prime(p)) p = prime_dist(rng);

  IntMatrix rows = IntMatrix::Zero(dimension, dimension);
  rows(0, 0) = p;
  std::uniform_int_distribution<std::int64_t> x_dist(0, p - 1);
  for (int i = 1; i < dimension; ++i) {
    rows(i, 0) = x_dist(rng);
    rows(i, i) = 1;
  }
  return Basis(std::move(rows));
}

Basis read_basis(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("basis file: missing dimension line");
  std::istringstream head(line);
  long long d = 0;
  if (!(head >> d) || d < 2 || d > 1000) throw ParseError("basis file: invalid dimension");
  IntMatrix rows(d, d);
  for (long long i = 0; i < d; ++i) {
    if (!next_line(in, line)) throw ParseError("basis file: missing row " + std::to_string(i + 1));
    std::istringstream row(line);
    for (long long j = 0; j < d; ++j) {
      long long x = 0;
      if (!(row >> x)) throw ParseError("basis file: row " + std::to_string(i + 1) + " too short");
      rows(i, j) = x;
    }
    std::string extra;
    if (row >> extra) throw ParseError("basis file: row " + std::to_string(i + 1) + " too long");
  }
  return Basis(std::move(rows));
}

void write_basis(std::ostream& out, const Basis& basis) {
  out << basis.dimension() << '\n';
  for (Eigen::Index i = 0; i < basis.rows().rows(); ++i) {
    for (Eigen::Index j = 0; j < basis.rows().cols(); ++j) out << (j ? " " : "") << basis.rows()(i, j);
    out << '\n';
  }
}

Basis load_basis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open basis file " + path);
  return read_basis(in);
}

namespace {

TargetVector parse_target(const std::string& line, int dimension) {
  std::istringstream row(line);
  RealVector t(dimension);
  for (int i = 0; i < dimension; ++i)
    if (!(row >> t(i))) throw ParseError("target file: expected " + std::to_string(dimension) + " reals");
  std::string extra;
  if (row >> extra) throw ParseError("target file: too many entries");
  if (!t.allFinite()) throw ParseError("target file: non-finite entry");
  return TargetVector(std::move(t));
}

}  // namespace

TargetVector read_target(std::istream& in, int dimension) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("target file: empty");
  return parse_target(line, dimension);
}

std::vector<TargetVector> read_targets(std::istream& in, int dimension) {
  std::vector<TargetVector> out;
  for (std::string line; next_line(in, line);) out.push_back(parse_target(line, dimension));
  if (out.empty()) throw ParseError("target file: empty");
  return out;
}

TargetVector load_target_file(const std::string& path, int dimension) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open target file " + path);
  return read_target(in, dimension);
}

void write_target(std::ostream& out, const TargetVector& target) {
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < target.coords.size(); ++i) out << (i ? " " : "") << target.coords(i);
  out << '\n';
}

}  // namespace sievekit
