#pragma once

#include "sievekit/sieve.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace sievekit {

/// Lists of lattice vectors near 0 (list_zero, symmetric) and near the
/// target (list_target, exact keys). `radius` bounds the norms in list_zero
/// and the distances to the target in list_target.
struct TwoListState {
  SieveList list_zero;
  SieveList list_target{SieveList::Dedupe::exact};
  TargetVector target;
  double radius = 0.0;

  double distance(const LatticeVector& v) const { return (v.coords - target.coords).norm(); }
};

/// One step of the two-list sieve with bound gamma * radius:
/// list_zero' from w1 -/+ w2 over pairs of list_zero, list_target' from
/// w1 -/+ w2 with w1 in list_target and w2 in list_zero. The returned state
/// carries radius gamma * R. `options.cap` applies to each list separately.
TwoListState adaptive_sieve_step(const TwoListState& state, double gamma, const PairScanOptions& options = {});

struct AdaptiveIterationRecord {
  int iteration = 0;
  std::size_t zero_size = 0;
  std::size_t target_size = 0;
  double radius = 0.0;
  double best_distance = 0.0;
};

using AdaptiveProgress = std::function<void(const AdaptiveIterationRecord&)>;

struct AdaptiveCvpConfig {
  double initial_list_exponent = 0.21;  // both lists start at 2^(e d + offset)
  double initial_list_offset = 4.0;
  double gamma = 0.97;
  double spread_exponent = 0.1;
  double initial_radius_factor = 1.5;
  double stop_slack = 1.02;  // stop once R <= sqrt(4/3) lambda_1 * slack
  double starvation_factor = 1.5;  // an empty target list above this multiple of the stop radius is an error
  PairScanOptions pair_scan{};
  AdaptiveProgress progress{};
};

struct AdaptiveCvpResult {
  LatticeVector closest;
  double distance = 0.0;
  Lambda1Estimate lambda1;
  std::vector<AdaptiveIterationRecord> trace;
  std::size_t initial_size = 0;
  std::size_t peak_zero_size = 0;
  std::size_t peak_target_size = 0;
};

struct TargetStarvationError : std::runtime_error {
  TargetStarvationError(const std::string& what, std::vector<AdaptiveIterationRecord> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<AdaptiveIterationRecord> trace;
};

/// Closest-vector search by the two-list sieve. Returns the closest
/// target-side entry seen in any iteration. Throws TargetStarvationError if
/// the target list empties above starvation_factor times the stop radius.
AdaptiveCvpResult solve_cvp_adaptive(const Basis& basis, const TargetVector& target, std::uint64_t rng_seed,
                                     const AdaptiveCvpConfig& config = {});

}  // namespace sievekit
