#include "sievekit/cvpp.hpp"

#include "sievekit/enumerate.hpp"
#include "sievekit/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace sievekit {

CvppMode CvppMode::bdd(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("BDD delta must lie in (0, 1]");
  return {Kind::bdd, delta};
}

CvppMode CvppMode::approx(double kappa) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw DomainError("approximation factor kappa must be >= 1");
  return {Kind::approx, kappa};
}

std::string CvppMode::describe() const {
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::bdd:
      return "bdd(delta=" + std::to_string(param) + ")";
    case Kind::approx:
      return "approx(kappa=" + std::to_string(param) + ")";
  }
  return "?";
}

const char* to_string(CvppMode::Kind kind) {
  switch (kind) {
    case CvppMode::Kind::exact:
      return "exact";
    case CvppMode::Kind::bdd:
      return "bdd";
    case CvppMode::Kind::approx:
      return "approx";
  }
  return "?";
}

double min_alpha(const CvppMode& mode) {
  switch (mode.kind) {
    case CvppMode::Kind::exact:
      return std::sqrt(2.0);
    case CvppMode::Kind::bdd: {
      const double d = CvppMode::bdd(mode.param).param;
      const double a = 1.0 + d * d;
      return std::sqrt((2.0 / 3.0) * a + (2.0 / 3.0) * std::sqrt(a * a - 3.0 * d * d));
    }
    case CvppMode::Kind::approx: {
      const double k = CvppMode::approx(mode.param).param;
      // 2k(k - sqrt(k^2 - 1)) without the cancellation for large k.
      return std::sqrt(2.0 * k / (k + std::sqrt(k * k - 1.0)));
    }
  }
  throw DomainError("unknown CVPP mode");
}

double expected_beta(double alpha) {
  if (!(alpha > 1.0)) throw DomainError("expected_beta requires alpha > 1");
  // a^2 / (2 sqrt(a^2 - 1)) decreases on (1, sqrt 2] and increases after.
  if (alpha >= std::sqrt(2.0)) return 1.0;
  return alpha * alpha / (2.0 * std::sqrt(alpha * alpha - 1.0));
}

double reducibility_probability(double v_norm, double w_norm, int dimension) {
  if (!(v_norm > 0.0) || !(w_norm > 0.0)) throw DomainError("norms must be positive");
  if (dimension < 1) throw DomainError("dimension must be positive");
  const double r = w_norm / (2.0 * v_norm);
  if (r >= 1.0) return 0.0;
  return std::pow(1.0 - r * r, dimension / 2.0);
}

namespace {

LsfIndex build_index(int dimension, const RealMatrix& coords, const LsfSection& s) {
  LsfIndex index(dimension, LsfParams::make(s.theta, s.u, s.num_filters), s.seed);
  std::vector<LsfIndex::Id> ids(static_cast<std::size_t>(coords.rows()));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  if (!ids.empty()) index.insert_batch(ids, coords);
  return index;
}

}  // namespace

PreprocessedList::PreprocessedList(const Basis& basis, CvppParams params, Lambda1Estimate lambda1,
                                   const std::vector<LatticeVector>& vectors, std::optional<LsfSection> lsf,
                                   PreprocessMetadata metadata,
                                   const std::vector<LatticeVector>& start_candidates)
    : dimension_(basis.dimension()),
      fingerprint_(basis.fingerprint()),
      params_(params),
      lambda1_(lambda1),
      lsf_(lsf),
      metadata_(metadata) {
  if (!(lambda1.value > 0.0)) throw DomainError("lambda_1 estimate must be positive");
  const double limit = params.alpha * lambda1.value * kNormSlack;
  std::vector<LatticeVector> sorted;
  sorted.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.coeffs.size() != dimension_) throw std::invalid_argument("list vector has the wrong dimension");
    if (v.norm() > limit * (1.0 + kRelTol)) throw std::invalid_argument("list vector exceeds alpha * lambda_1 * 1.02");
    sorted.push_back(sign_canonical(v));
  }
  std::sort(sorted.begin(), sorted.end(), [](const LatticeVector& a, const LatticeVector& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return lex_less(a.coeffs, b.coeffs);
  });
  for (auto& v : sorted) list_.insert(std::move(v));
  coords_.resize(static_cast<Eigen::Index>(list_.size()), dimension_);
  for (std::size_t i = 0; i < list_.size(); ++i) coords_.row(static_cast<Eigen::Index>(i)) = list_[i].coords.transpose();
  if (lsf_) index_.emplace(build_index(dimension_, coords_, *lsf_));

  std::vector<LatticeVector> pool;
  for (const auto& v : start_candidates) pool.push_back(v);
  std::stable_sort(pool.begin(), pool.end(),
                   [](const LatticeVector& x, const LatticeVector& y) { return x.norm2 < y.norm2; });
  for (const auto& v : list_) pool.push_back(v);
  for (Eigen::Index i = 0; i < dimension_; ++i) {
    IntVector e = IntVector::Zero(dimension_);
    e(i) = 1;
    pool.push_back(LatticeVector::from_coeffs(basis, std::move(e)));
  }
  std::vector<RealVector> ortho;
  for (const auto& v : pool) {
    if (static_cast<int>(start_.size()) == dimension_) break;
    if (v.coeffs.size() != dimension_ || v.is_zero()) continue;
    RealVector r = v.coords;
    for (const auto& o : ortho) r -= (r.dot(o) / o.squaredNorm()) * o;
    if (r.squaredNorm() > 1e-6 * v.norm2) {
      ortho.push_back(r);
      start_.push_back(v);
    }
  }
  RealMatrix rows(dimension_, dimension_);
  for (int i = 0; i < dimension_; ++i) rows.row(i) = start_[static_cast<std::size_t>(i)].coords.transpose();
  start_gso_ = gram_schmidt(rows);
}

void PreprocessedList::check_basis(const Basis& basis) const {
  if (basis.fingerprint() != fingerprint_)
    throw WrongLatticeError("list was built for basis " + to_hex(fingerprint_) + ", got " +
                            to_hex(basis.fingerprint()));
}

PreprocessedList preprocess(const Basis& basis, const CvppParams& params, std::uint64_t rng_seed,
                            const PreprocessOptions& options) {
  const double threshold = min_alpha(params.mode);
  if (!(params.alpha >= 1.0) || !std::isfinite(params.alpha)) throw DomainError("alpha must be >= 1");
  if (params.alpha < threshold * (1.0 - 1e-12) && !options.allow_uncertified) {
    throw CertificationError("alpha " + std::to_string(params.alpha) + " is below " + std::to_string(threshold) +
                             " required for " + params.mode.describe());
  }
  const int d = basis.dimension();
  const Lambda1Estimate lambda1 = lambda1_estimate(basis);
  const GaussSieveResult sieve =
      relaxed_gauss_sieve(basis, params.alpha, options.termination, rng_seed, options.sieve);

  const double limit = params.alpha * lambda1.value * PreprocessedList::kNormSlack;
  std::vector<LatticeVector> kept;
  for (const auto& v : sieve.list)
    if (v.norm() <= limit) kept.push_back(v);

  std::optional<LsfSection> lsf;
  if (options.use_lsf) {
    if (!(params.alpha > 1.0)) throw DomainError("a filter index needs alpha > 1");
    LsfSection s;
    s.seed = subseed(rng_seed, 0x15F);
    s.theta = std::asin(1.0 / params.alpha);
    s.u = options.lsf_u;
    s.num_filters = options.num_filters ? options.num_filters : default_num_filters(d, s.theta, s.u);
    lsf = s;
  }
  PreprocessMetadata meta{rng_seed, sieve.stats.samples, sieve.stats.collisions, sieve.stats.certified};
  return PreprocessedList(basis, params, lambda1, kept, lsf, meta, sieve.list.entries());
}

ReducedTarget reduce_target(const PreprocessedList& list, const Basis& basis, const TargetVector& target) {
  list.check_basis(basis);
  if (target.dimension() != list.dimension()) throw DomainError("target dimension does not match the list");
  const double slack = 1e-9 * list.lambda1().value;
  const auto& entries = list.list().entries();
  const LsfIndex* index = list.index();

  ReducedTarget r;
  r.lattice_part = LatticeVector::zero(list.dimension());
  r.t_prime = target.coords;
  const auto& start = list.start_basis();
  const auto& gs = list.start_gso();
  for (auto j = static_cast<Eigen::Index>(start.size()) - 1; j >= 0; --j) {
    const double c = r.t_prime.dot(gs.ortho.row(j).transpose()) / gs.norms2(j);
    const auto k = static_cast<std::int64_t>(std::nearbyint(c));
    if (k == 0) continue;
    r.lattice_part.subtract(start[static_cast<std::size_t>(j)], -k);
    r.t_prime = target.coords - r.lattice_part.coords;
  }
  std::vector<LsfIndex::Id> cand;
  RealVector dots;
  for (;;) {
    const double n2 = r.t_prime.squaredNorm();
    const double limit = std::sqrt(n2) - slack;
    if (!(limit > 0.0)) break;
    const double limit2 = limit * limit;

    // First entry (in list order) with a reducing multiple.
    std::int64_t k = 0;
    std::size_t hit = 0;
    auto test = [&](std::size_t i, double dot) {
      const double w2 = entries[i].norm2;
      const double m = std::nearbyint(dot / w2);
      if (m == 0.0) return false;
      if (n2 - 2.0 * m * dot + m * m * w2 >= limit2) return false;
      k = static_cast<std::int64_t>(m);
      hit = i;
      return true;
    };
    if (index) {
      cand = index->query_candidates_symmetric(r.t_prime);
      for (auto id : cand)
        if (test(id, list.coords().row(static_cast<Eigen::Index>(id)).dot(r.t_prime.transpose()))) break;
    } else {
      dots.noalias() = list.coords() * r.t_prime;
      for (std::size_t i = 0; i < entries.size(); ++i)
        if (test(i, dots(static_cast<Eigen::Index>(i)))) break;
    }
    if (k == 0) break;
    r.lattice_part.subtract(entries[hit], -k);
    r.t_prime = target.coords - r.lattice_part.coords;
    ++r.reduction_count;
  }
  r.beta = r.t_prime.norm() / list.lambda1().value;
  return r;
}

CvppSolution solve(const PreprocessedList& list, const Basis& basis, const TargetVector& target) {
  ReducedTarget r = reduce_target(list, basis, target);
  CvppSolution s;
  s.distance = r.t_prime.norm();
  s.certificate.beta = r.beta;
  s.certificate.mode = list.params().mode;
  s.certificate.within_bound = r.beta <= list.params().mode.beta_bound() * (1.0 + kRelTol);
  s.certificate.used_index = list.index() != nullptr;
  s.certificate.reduction_count = r.reduction_count;
  s.vector = std::move(r.lattice_part);
  return s;
}

PlantedTarget plant_target(const Basis& basis, double noise_norm, Rng& rng) {
  if (!(noise_norm >= 0.0)) throw DomainError("noise norm must be nonnegative");
  const int d = basis.dimension();
  const KleinSampler sampler(basis, std::exp2(0.1 * d) * gaussian_heuristic_lambda1(basis).value);
  PlantedTarget p;
  p.planted = sampler.sample(rng);
  p.target = TargetVector(p.planted.coords + random_unit_vector(d, rng) * noise_norm);
  return p;
}

std::vector<CollisionRate> collision_experiment(const Basis& basis, const PreprocessedList& list, std::size_t trials,
                                                std::uint64_t rng_seed, const std::vector<double>& deltas) {
  list.check_basis(basis);
  const double lambda1 = list.lambda1().value;
  std::vector<CollisionRate> out;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] >= 0.0)) throw DomainError("noise level delta must be nonnegative");
    CollisionRate rate{deltas[k], trials, 0};
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng(subseed(subseed(rng_seed, k), i));
      const PlantedTarget p = plant_target(basis, deltas[k] * lambda1, rng);
      const ReducedTarget r = reduce_target(list, basis, p.target);
      if (r.lattice_part.coeffs == p.planted.coeffs) ++rate.recovered;
    }
    out.push_back(rate);
  }
  return out;
}

namespace {

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <typename T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v)); }
  void i64(std::int64_t v) { uint(static_cast<std::uint64_t>(v)); }
  void bytes(const std::uint8_t* p, std::size_t n) { out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n)); }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename T>
  T uint() {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) throw ParseError("truncated list file");
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    return static_cast<T>(v);
  }
  double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }
  std::int64_t i64() { return static_cast<std::int64_t>(uint<std::uint64_t>()); }
  void bytes(std::uint8_t* p, std::size_t n) {
    if (!in_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n))) throw ParseError("truncated list file");
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_preprocessed(std::ostream& out, const PreprocessedList& list) {
  Writer w(out);
  w.bytes(reinterpret_cast<const std::uint8_t*>("CVPP"), 4);
  w.uint<std::uint16_t>(kListFormatVersion);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(list.dimension()));
  w.f64(list.alpha());
  w.f64(list.lambda1().value);
  w.uint<std::uint8_t>(static_cast<std::uint8_t>(list.lambda1().source));
  w.bytes(list.fingerprint().data(), list.fingerprint().size());
  w.uint<std::uint64_t>(list.size());
  for (const auto& v : list.list())
    for (auto c : v.coeffs) w.i64(c);
  w.uint<std::uint8_t>(list.lsf() ? 1 : 0);
  if (const auto& s = list.lsf()) {
    w.uint<std::uint64_t>(s->seed);
    w.f64(s->theta);
    w.f64(s->u);
    w.uint<std::uint64_t>(s->num_filters);
  }
  const auto& m = list.metadata();
  w.uint<std::uint64_t>(m.seed);
  w.uint<std::uint64_t>(m.samples);
  w.uint<std::uint64_t>(m.collisions);
  w.uint<std::uint8_t>(m.certified ? 1 : 0);
  w.uint<std::uint8_t>(static_cast<std::uint8_t>(list.params().mode.kind));
  w.f64(list.params().mode.param);
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(list.start_basis().size()));
  for (const auto& v : list.start_basis())
    for (auto c : v.coeffs) w.i64(c);
  if (!out) throw std::runtime_error("failed to write list file");
}

void save_preprocessed_file(const std::string& path, const PreprocessedList& list) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_preprocessed(out, list);
}

PreprocessedList load_preprocessed(std::istream& in, const Basis& basis) {
  Reader r(in);
  std::uint8_t magic[4];
  r.bytes(magic, 4);
  if (std::string(reinterpret_cast<char*>(magic), 4) != "CVPP") throw ParseError("not a CVPP list file");
  if (const auto version = r.uint<std::uint16_t>(); version != kListFormatVersion)
    throw ParseError("unsupported list format version " + std::to_string(version));
  const auto d = r.uint<std::uint32_t>();
  if (static_cast<int>(d) != basis.dimension())
    throw WrongLatticeError("list dimension " + std::to_string(d) + " does not match the basis");
  CvppParams params;
  params.alpha = r.f64();
  Lambda1Estimate lambda1;
  lambda1.value = r.f64();
  const auto source = r.uint<std::uint8_t>();
  if (source > 1) throw ParseError("bad lambda_1 source tag");
  lambda1.source = static_cast<Lambda1Source>(source);
  Fingerprint fp;
  r.bytes(fp.data(), fp.size());
  if (fp != basis.fingerprint())
    throw WrongLatticeError("list was built for basis " + to_hex(fp) + ", got " + to_hex(basis.fingerprint()));
  const auto length = r.uint<std::uint64_t>();
  std::vector<LatticeVector> vectors;
  for (std::uint64_t i = 0; i < length; ++i) {
    IntVector c(d);
    for (std::uint32_t j = 0; j < d; ++j) c(j) = r.i64();
    vectors.push_back(LatticeVector::from_coeffs(basis, std::move(c)));
  }
  std::optional<LsfSection> lsf;
  const auto has_lsf = r.uint<std::uint8_t>();
  if (has_lsf > 1) throw ParseError("bad filter section flag");
  if (has_lsf) {
    LsfSection s;
    s.seed = r.uint<std::uint64_t>();
    s.theta = r.f64();
    s.u = r.f64();
    s.num_filters = r.uint<std::uint64_t>();
    lsf = s;
  }
  PreprocessMetadata meta;
  meta.seed = r.uint<std::uint64_t>();
  meta.samples = r.uint<std::uint64_t>();
  meta.collisions = r.uint<std::uint64_t>();
  meta.certified = r.uint<std::uint8_t>() != 0;
  const auto kind = r.uint<std::uint8_t>();
  if (kind > 2) throw ParseError("bad mode tag");
  params.mode.kind = static_cast<CvppMode::Kind>(kind);
  params.mode.param = r.f64();
  const auto rank = r.uint<std::uint32_t>();
  if (rank > d) throw ParseError("start basis larger than the dimension");
  std::vector<LatticeVector> start;
  for (std::uint32_t i = 0; i < rank; ++i) {
    IntVector c(d);
    for (std::uint32_t j = 0; j < d; ++j) c(j) = r.i64();
    start.push_back(LatticeVector::from_coeffs(basis, std::move(c)));
  }
  try {
    return PreprocessedList(basis, params, lambda1, vectors, lsf, meta, start);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent list file: ") + e.what());
  }
}

PreprocessedList load_preprocessed_file(const std::string& path, const Basis& basis) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  return load_preprocessed(in, basis);
}

}  // namespace sievekit
