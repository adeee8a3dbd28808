#pragma once

#include "sievekit/core.hpp"

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

namespace sievekit {

/// Spherical filter parameters: update threshold alpha_u = cos(theta),
/// query threshold alpha_q = u * cos(theta).
struct LsfParams {
  double theta = 0.0;
  double u = 1.0;
  double alpha_q = 0.0;
  double alpha_u = 0.0;
  std::size_t num_filters = 1;

  /// Validates theta in (0, pi/2), u in [cos theta, 1/cos theta] and
  /// num_filters >= 1.
  static LsfParams make(double theta, double u, std::size_t num_filters);
};

/// Per-dimension base-2 exponents of the filter tradeoff.
struct NnsExponents {
  double rho_q = 0.0;
  double rho_u = 0.0;
  double n_exponent = 0.0;  // log2(1 / sin theta)

  double query_exp() const { return rho_q; }
  double space_exp() const { return n_exponent + rho_u; }
};

NnsExponents compute_exponents(double theta, double u);

/// Monte-Carlo mass of {f : <f, x> >= alpha_u, <f, y> >= alpha_q} for unit
/// x, y at angle `angle` and f uniform on S^{d-1}. Only the projection of f
/// onto span(x, y) is sampled.
double wedge_mass(int dimension, double angle, double alpha_u, double alpha_q,
                  std::uint64_t seed, std::size_t samples);

/// Monte-Carlo mass of the cap {f : <f, x> >= alpha}.
double cap_mass(int dimension, double alpha, std::uint64_t seed, std::size_t samples);

/// ceil(3 / W) where W is the wedge mass at angle theta; cached per
/// (d, theta, u).
std::size_t default_num_filters(int dimension, double theta, double u);

/// Spherical-cap filter index. Stored vector v lives in bucket f iff
/// <v/|v|, f> >= alpha_u; a query t inspects buckets with <t/|t|, f> >= alpha_q.
/// An index built with brute_force() has no filters and every query returns
/// all stored ids.
class LsfIndex {
 public:
  using Id = std::uint64_t;

  /// Upper bound on num_filters * dimension (filter matrix entries).
  static constexpr std::size_t kMaxFilterEntries = std::size_t{1} << 27;

  /// Throws ResourceCapError if the filter matrix would exceed
  /// kMaxFilterEntries.
  LsfIndex(int dimension, const LsfParams& params, std::uint64_t rng_seed);
  static LsfIndex brute_force(int dimension);

  int dimension() const { return dimension_; }
  bool is_brute_force() const { return brute_; }
  const LsfParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  const RealMatrix& filters() const { return filters_; }
  std::size_t size() const { return store_.size(); }
  bool contains(Id id) const { return store_.count(id) != 0; }

  void insert(Id id, const RealVector& vector);
  /// Batch insert of the rows of `vectors`.
  void insert_batch(const std::vector<Id>& ids, const RealMatrix& vectors);
  void remove(Id id);
  void clear();

  /// Candidate ids for `target`, deduplicated, unspecified order.
  std::vector<Id> query_candidates(const RealVector& target) const;
  /// Union of the candidates for `target` and `-target`.
  std::vector<Id> query_candidates_symmetric(const RealVector& target) const;

  /// Buckets that currently hold `id`.
  const std::vector<std::uint32_t>& buckets_of(Id id) const;
  const std::vector<Id>& bucket(std::size_t f) const { return buckets_[f]; }

  /// Equality of stored ids and bucket contents (as sets).
  friend bool operator==(const LsfIndex& a, const LsfIndex& b);

 private:
  LsfIndex() = default;
  void place(Id id, const Eigen::Ref<const RealVector>& products);

  struct Entry {
    std::vector<std::uint32_t> buckets;
  };

  int dimension_ = 0;
  bool brute_ = false;
  LsfParams params_{};
  std::uint64_t seed_ = 0;
  RealMatrix filters_;  // num_filters x d, unit rows
  std::vector<std::vector<Id>> buckets_;
  std::unordered_map<Id, Entry> store_;
};

}  // namespace sievekit
