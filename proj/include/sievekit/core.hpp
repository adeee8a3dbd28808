#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sievekit {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using IntVector = Vector<std::int64_t>;
using IntMatrix = Matrix<std::int64_t>;
using RealVector = Vector<double>;
using RealMatrix = Matrix<double>;

using Rng = std::mt19937_64;

/// Relative slack used for every norm comparison in the geometry layer.
inline constexpr double kRelTol = 1e-9;

/// Deterministic child seed for trial `index` of a run seeded with `seed`
/// (splitmix64 finalizer over the pair).
constexpr std::uint64_t subseed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Error hierarchy. Domain errors signal out-of-range parameters of pure
// functions; the rest are raised by lattice operations.

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularBasisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleCapError : std::length_error {
  using std::length_error::length_error;
};

/// A requested structure would exceed the memory budget.
struct ResourceCapError : std::length_error {
  using std::length_error::length_error;
};

struct EmptyResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFoundError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct WrongLatticeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CertificationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace sievekit
