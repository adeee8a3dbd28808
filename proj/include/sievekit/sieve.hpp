#pragma once

#include "sievekit/lattice.hpp"
#include "sievekit/lsf.hpp"

#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

namespace sievekit {

struct CoeffHash {
  std::size_t operator()(const IntVector& v) const noexcept;
};

/// Collection of nonzero lattice vectors without duplicates. With
/// Dedupe::sign the key is the sign-canonical coefficient vector, so the list
/// stands for the symmetric set {+/- v}; Dedupe::exact keys on the
/// coefficients as stored and admits the zero vector (used for lists
/// clustered around a target).
class SieveList {
 public:
  enum class Dedupe { sign, exact };

  explicit SieveList(Dedupe dedupe = Dedupe::sign) : dedupe_(dedupe) {}

  /// False if `v` is already present, or zero in a sign-deduplicated list.
  bool insert(LatticeVector v);
  bool contains(const LatticeVector& v) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<LatticeVector>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  const LatticeVector& operator[](std::size_t i) const { return entries_[i]; }
  Dedupe dedupe() const { return dedupe_; }

  /// Shortest entry; throws on an empty list.
  const LatticeVector& shortest() const;
  double max_norm() const;
  void clear();

 private:
  IntVector key(const LatticeVector& v) const;

  Dedupe dedupe_;
  std::vector<LatticeVector> entries_;
  std::unordered_set<IntVector, CoeffHash> keys_;
};

enum class PairScan { brute, lsf };

const char* to_string(PairScan scan);

struct SieveStepParams {
  double gamma = 0.97;
  double max_norm = 0.0;  // R

  void validate() const;
};

struct PairScanOptions {
  PairScan scan = PairScan::brute;
  std::size_t num_filters = 0;  // 0: default_num_filters
  std::uint64_t lsf_seed = 0;
  std::size_t cap = 0;  // keep at most this many (shortest) outputs; 0: no cap
};

/// One pass of the quadratic sieve: every w1 - w2 and w1 + w2 over pairs of
/// the (symmetric) input with norm <= gamma R, zero excluded, deduplicated.
SieveList nv_sieve_step(const SieveList& list, const SieveStepParams& params,
                        const PairScanOptions& options = {});

struct NvIterationRecord {
  int iteration = 0;
  std::size_t list_size = 0;
  double radius = 0.0;
  double min_norm = 0.0;
};

using NvProgress = std::function<void(const NvIterationRecord&)>;

struct NvSieveConfig {
  double initial_list_exponent = 0.21;  // list size 2^(e d + offset)
  double initial_list_offset = 4.0;
  double gamma = 0.97;
  double spread_exponent = 0.1;  // sampling spread 2^(s d) * GH
  PairScanOptions pair_scan{};
  NvProgress progress{};
};

struct NvSieveResult {
  SieveList list;           // last nonempty list
  LatticeVector shortest;   // shortest vector seen in any iteration
  std::vector<NvIterationRecord> trace;
  std::size_t initial_size = 0;
  std::size_t peak_size = 0;
};

struct StarvationError : std::runtime_error {
  StarvationError(const std::string& what, std::vector<NvIterationRecord> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<NvIterationRecord> trace;
};

NvSieveResult run_nv_sieve(const Basis& basis, const NvSieveConfig& config, std::uint64_t rng_seed);

/// Saturation rule for the Gauss sieves: stop when collisions reach
/// max(min_collisions, collision_fraction |L|) (certified) or when the sample
/// budget 2^(sample_exponent d + sample_offset) runs out (not certified).
struct TerminationRule {
  std::size_t min_collisions = 100;
  double collision_fraction = 0.1;
  double sample_exponent = 0.25;
  double sample_offset = 8.0;
  std::optional<std::size_t> max_samples{};

  std::size_t sample_budget(int dimension) const;
};

struct GaussProgressRecord {
  std::size_t iteration = 0;
  std::size_t list_size = 0;
  double min_norm = 0.0;
  std::size_t collisions = 0;
};

using GaussProgress = std::function<void(const GaussProgressRecord&)>;

struct GaussSieveOptions {
  PairScan scan = PairScan::brute;
  double lsf_u = 1.0;
  std::size_t num_filters = 0;  // 0: default_num_filters
  double spread = 0.0;          // 0: 2^(0.1 d) * GH
  GaussProgress progress{};
  std::size_t progress_every = 1000;
};

struct GaussSieveStats {
  std::size_t samples = 0;
  std::size_t iterations = 0;
  std::size_t collisions = 0;
  std::size_t reductions = 0;
  std::size_t peak_list_size = 0;
  bool certified = false;  // false when the sample budget ran out
};

struct GaussSieveResult {
  LatticeVector shortest;
  SieveList list;
  GaussSieveStats stats;
  double alpha0 = 0.0;
  double threshold = 1.0;  // c(alpha0)
};

/// c(alpha) = 2 - (2/alpha) sqrt(alpha^2 - 1); reduce v by w when
/// |v - w|^2 <= c(alpha) |v|^2.
double reduction_threshold(double alpha);

/// GaussSieve. The list is kept pairwise reduced:
/// |w1 +/- w2| >= max(|w1|, |w2|) for all w1 != w2 (brute-force scan).
GaussSieveResult gauss_sieve(const Basis& basis, const TerminationRule& termination,
                             std::uint64_t rng_seed, const GaussSieveOptions& options = {});

/// GaussSieve with reductions restricted to angles below arcsin(1/alpha0),
/// alpha0 = max(alpha, sqrt(4/3)); the list approaches all vectors of norm
/// <= alpha0 lambda_1.
GaussSieveResult relaxed_gauss_sieve(const Basis& basis, double alpha, const TerminationRule& termination,
                                     std::uint64_t rng_seed, const GaussSieveOptions& options = {});

/// True if every pair in the list satisfies the unreducibility condition
/// under threshold c (|w1 -+ w2|^2 > c |w1|^2 up to slack).
bool is_pairwise_reduced(const SieveList& list, double threshold = 1.0);

}  // namespace sievekit
