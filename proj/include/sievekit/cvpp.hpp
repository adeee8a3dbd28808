#pragma once

#include "sievekit/lsf.hpp"
#include "sievekit/sieve.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sievekit {

/// Problem variant solved with a preprocessed list: exact CVP, BDD with
/// target distance delta * lambda_1, or kappa-approximate CVP.
struct CvppMode {
  enum class Kind : std::uint8_t { exact = 0, bdd = 1, approx = 2 };

  Kind kind = Kind::exact;
  double param = 1.0;  // delta for bdd, kappa for approx

  static CvppMode exact() { return {}; }
  static CvppMode bdd(double delta);
  static CvppMode approx(double kappa);

  /// Largest beta = |t'| / lambda_1 the mode accepts: 1, delta or kappa.
  double beta_bound() const { return param; }
  std::string describe() const;
};

const char* to_string(CvppMode::Kind kind);

/// Smallest list radius factor alpha for which reduction is expected to
/// succeed: sqrt(2) for exact CVP, the BDD condition
/// alpha^2 = (2/3)(1 + delta^2) + (2/3) sqrt((1 + delta^2)^2 - 3 delta^2),
/// and the approximate condition alpha^2 = 2 kappa (kappa - sqrt(kappa^2 - 1)).
double min_alpha(const CvppMode& mode);

/// Norm (in units of lambda_1) at which reduction with a list of radius
/// alpha lambda_1 stalls: the minimum of a^2 / (2 sqrt(a^2 - 1)) over
/// a in (1, alpha].
double expected_beta(double alpha);

/// [1 - (w / 2v)^2]^(d/2): chance that a random w of norm w_norm reduces a
/// random v of norm v_norm. Zero once w_norm >= 2 v_norm.
double reducibility_probability(double v_norm, double w_norm, int dimension);

struct CvppParams {
  double alpha = 1.4142135623730951;
  CvppMode mode{};

  static CvppParams for_mode(const CvppMode& mode) { return {min_alpha(mode), mode}; }
};

/// Filter settings of a list index. Filters are regenerated from the seed.
struct LsfSection {
  std::uint64_t seed = 0;
  double theta = 0.0;
  double u = 1.0;
  std::uint64_t num_filters = 0;
};

struct PreprocessMetadata {
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t collisions = 0;
  bool certified = false;
};

/// Short-vector list of one lattice. Entries are sorted by norm, then by
/// coefficients, and all have norm <= alpha * lambda_1 * 1.02. Immutable;
/// concurrent queries are safe.
class PreprocessedList {
 public:
  static constexpr double kNormSlack = 1.02;

  /// The start basis is picked greedily (shortest first) from
  /// `start_candidates`, then the list, then the basis rows, so it always
  /// has full rank.
  PreprocessedList(const Basis& basis, CvppParams params, Lambda1Estimate lambda1,
                   const std::vector<LatticeVector>& vectors, std::optional<LsfSection> lsf,
                   PreprocessMetadata metadata, const std::vector<LatticeVector>& start_candidates = {});

  int dimension() const { return dimension_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  double alpha() const { return params_.alpha; }
  const CvppParams& params() const { return params_; }
  const Lambda1Estimate& lambda1() const { return lambda1_; }
  const SieveList& list() const { return list_; }
  std::size_t size() const { return list_.size(); }
  const RealMatrix& coords() const { return coords_; }
  const std::optional<LsfSection>& lsf() const { return lsf_; }
  const LsfIndex* index() const { return index_ ? &*index_ : nullptr; }
  const PreprocessMetadata& metadata() const { return metadata_; }

  /// Short full-rank set of lattice vectors; queries start from the
  /// nearest-plane representative of t + L with respect to it.
  const std::vector<LatticeVector>& start_basis() const { return start_; }
  const GramSchmidt<double>& start_gso() const { return start_gso_; }

  /// Throws WrongLatticeError unless `basis` has the stored fingerprint.
  void check_basis(const Basis& basis) const;

 private:
  int dimension_;
  Fingerprint fingerprint_;
  CvppParams params_;
  Lambda1Estimate lambda1_;
  SieveList list_;
  RealMatrix coords_;  // one row per list entry
  std::optional<LsfSection> lsf_;
  std::optional<LsfIndex> index_;
  PreprocessMetadata metadata_;
  std::vector<LatticeVector> start_;
  GramSchmidt<double> start_gso_;
};

struct PreprocessOptions {
  bool use_lsf = false;
  double lsf_u = 1.0;
  std::size_t num_filters = 0;  // 0: default_num_filters
  bool allow_uncertified = false;  // accept alpha below min_alpha(mode)
  TerminationRule termination{};
  GaussSieveOptions sieve{};
};

/// Relaxed Gauss sieve with threshold alpha, truncated to norm
/// <= alpha * lambda_1 * 1.02. lambda_1 is enumerated for d <= 40.
/// Throws CertificationError if alpha < min_alpha(mode) without
/// allow_uncertified.
PreprocessedList preprocess(const Basis& basis, const CvppParams& params, std::uint64_t rng_seed,
                            const PreprocessOptions& options = {});

struct ReducedTarget {
  RealVector t_prime;      // t - lattice_part
  LatticeVector lattice_part;
  double beta = 0.0;       // |t'| / lambda_1
  std::size_t reduction_count = 0;
};

/// Starting from the nearest-plane representative of t + L with respect to
/// the list's start basis, reduces t' by
/// list vectors while some multiple k w gives |t' - k w| < |t'| - 1e-9
/// lambda_1, rescanning the list (or querying the index) from the start
/// after each reduction. reduction_count counts list reductions only.
ReducedTarget reduce_target(const PreprocessedList& list, const Basis& basis, const TargetVector& target);

struct CvppCertificate {
  double beta = 0.0;
  CvppMode mode{};
  bool within_bound = false;  // beta <= mode.beta_bound()
  bool used_index = false;
  std::size_t reduction_count = 0;
};

struct CvppSolution {
  LatticeVector vector;  // s = t - t'
  double distance = 0.0;
  CvppCertificate certificate;
};

CvppSolution solve(const PreprocessedList& list, const Basis& basis, const TargetVector& target);

struct CollisionRate {
  double delta = 0.0;
  std::size_t trials = 0;
  std::size_t recovered = 0;

  double rate() const { return trials ? static_cast<double>(recovered) / static_cast<double>(trials) : 0.0; }
};

struct PlantedTarget {
  LatticeVector planted;
  TargetVector target;  // planted + noise, |noise| = noise_norm
};

/// Klein sample v (spread 2^(0.1 d) * GH) plus a uniformly random direction
/// scaled to noise_norm.
PlantedTarget plant_target(const Basis& basis, double noise_norm, Rng& rng);

/// For each delta, perturbs random lattice points v by noise of norm
/// delta * lambda_1 and counts the queries with t - t' = v.
std::vector<CollisionRate> collision_experiment(const Basis& basis, const PreprocessedList& list, std::size_t trials,
                                                std::uint64_t rng_seed,
                                                const std::vector<double>& deltas = {0.01, 0.1, 0.5});

/// Binary list format, little-endian:
///   "CVPP" | u16 version | u32 d | f64 alpha | f64 lambda_1 | u8 source |
///   32-byte fingerprint | u64 length | length * d i64 coefficients |
///   u8 has_lsf [u64 seed | f64 theta | f64 u | u64 num_filters] |
///   u64 seed | u64 samples | u64 collisions | u8 certified |
///   u8 mode kind | f64 mode param | u32 rank | rank * d i64 start basis
inline constexpr std::uint16_t kListFormatVersion = 1;

void save_preprocessed(std::ostream& out, const PreprocessedList& list);
void save_preprocessed_file(const std::string& path, const PreprocessedList& list);
/// Throws ParseError on malformed input and WrongLatticeError if the file
/// belongs to a different basis.
PreprocessedList load_preprocessed(std::istream& in, const Basis& basis);
PreprocessedList load_preprocessed_file(const std::string& path, const Basis& basis);

}  // namespace sievekit
