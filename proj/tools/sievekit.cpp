#include "sievekit/adaptive_cvp.hpp"
#include "sievekit/asymptotics.hpp"
#include "sievekit/cvpp.hpp"
#include "sievekit/enumerate.hpp"
#include "sievekit/harness.hpp"
#include "sievekit/sampler.hpp"
#include "sievekit/sieve.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace sk = sievekit;
using sievekit::harness::json;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kInputError = 2, kMismatch = 3, kResourceCap = 4 };

bool g_verbose = false;

void progress(const json& event) {
  if (g_verbose) std::cerr << event.dump() << '\n';
}

void warn(const std::string& message) {
  if (g_verbose)
    progress({{"event", "warning"}, {"message", message}});
  else
    std::cerr << "warning: " << message << '\n';
}

json coeffs_json(const sk::IntVector& v) { return std::vector<std::int64_t>(v.data(), v.data() + v.size()); }

bool norms_match(double a, double b) { return std::abs(a - b) <= sk::kRelTol * std::max(1.0, b); }

bool oracle_allowed(int d) {
  if (d <= sk::kOracleMaxDimension) return true;
  warn("d = " + std::to_string(d) + " exceeds the oracle limit " + std::to_string(sk::kOracleMaxDimension) +
       "; --verify skipped");
  return false;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sk::ParseError("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------- svp

struct SvpArgs {
  std::string basis;
  std::string algo = "gauss";
  std::string nns = "brute";
  std::uint64_t seed = 1;
  bool verify = false;
  bool json = false;
};

int cmd_svp(const SvpArgs& a) {
  const sk::Basis basis = sk::load_basis_file(a.basis);
  const auto scan = a.nns == "lsf" ? sk::PairScan::lsf : sk::PairScan::brute;
  json report{{"command", "svp"}, {"dimension", basis.dimension()}, {"algorithm", a.algo}, {"nns", a.nns},
              {"seed", a.seed}};
  sk::LatticeVector shortest;
  json telemetry;
  const double ms = sk::harness::timed_ms([&] {
    if (a.algo == "gauss") {
      sk::GaussSieveOptions opt;
      opt.scan = scan;
      opt.progress = [](const sk::GaussProgressRecord& r) {
        progress({{"event", "gauss"}, {"iteration", r.iteration}, {"list_size", r.list_size},
                  {"min_norm", r.min_norm}, {"collisions", r.collisions}});
      };
      const auto r = sk::gauss_sieve(basis, sk::TerminationRule{}, a.seed, opt);
      shortest = r.shortest;
      telemetry = {{"samples", r.stats.samples},       {"iterations", r.stats.iterations},
                   {"collisions", r.stats.collisions}, {"reductions", r.stats.reductions},
                   {"list_size", r.list.size()},       {"peak_list_size", r.stats.peak_list_size},
                   {"certified", r.stats.certified}};
    } else {
      sk::NvSieveConfig cfg;
      cfg.pair_scan.scan = scan;
      cfg.pair_scan.lsf_seed = sk::subseed(a.seed, 1);
      cfg.progress = [](const sk::NvIterationRecord& r) {
        progress({{"event", "nv"}, {"iteration", r.iteration}, {"list_size", r.list_size}, {"radius", r.radius},
                  {"min_norm", r.min_norm}});
      };
      const auto r = sk::run_nv_sieve(basis, cfg, a.seed);
      shortest = r.shortest;
      telemetry = {{"iterations", r.trace.size()},
                   {"initial_list_size", r.initial_size},
                   {"peak_list_size", r.peak_size},
                   {"list_size", r.list.size()}};
    }
  });
  telemetry["wall_ms"] = ms;
  report["norm"] = shortest.norm();
  report["coefficients"] = coeffs_json(shortest.coeffs);
  report["telemetry"] = telemetry;
  bool mismatch = false;
  if (a.verify && oracle_allowed(basis.dimension())) {
    const double lambda1 = sk::enumerate_svp(basis).norm();
    report["oracle_norm"] = lambda1;
    report["verified"] = norms_match(shortest.norm(), lambda1);
    mismatch = !report["verified"].get<bool>();
  }
  if (a.json) {
    std::cout << report.dump() << '\n';
  } else {
    std::cout << "norm " << shortest.norm() << "\ncoefficients " << report["coefficients"].dump() << '\n';
    for (const auto& [k, v] : telemetry.items()) std::cout << k << ' ' << v.dump() << '\n';
    if (report.contains("verified"))
      std::cout << "oracle_norm " << report["oracle_norm"].get<double>() << "\nverified "
                << report["verified"].dump() << '\n';
  }
  return mismatch ? kMismatch : kOk;
}

// ---------------------------------------------------------------- cvp

struct CvpArgs {
  std::string basis, target;
  std::string nns = "brute";
  std::uint64_t seed = 1;
  bool verify = false;
  bool json = false;
};

int cmd_cvp(const CvpArgs& a) {
  const sk::Basis basis = sk::load_basis_file(a.basis);
  const sk::TargetVector target = sk::load_target_file(a.target, basis.dimension());
  sk::AdaptiveCvpConfig cfg;
  cfg.pair_scan.scan = a.nns == "lsf" ? sk::PairScan::lsf : sk::PairScan::brute;
  cfg.pair_scan.lsf_seed = sk::subseed(a.seed, 1);
  cfg.progress = [](const sk::AdaptiveIterationRecord& r) {
    progress({{"event", "adaptive"}, {"iteration", r.iteration}, {"zero_size", r.zero_size},
              {"target_size", r.target_size}, {"radius", r.radius}, {"best_distance", r.best_distance}});
  };
  sk::AdaptiveCvpResult r;
  const double ms = sk::harness::timed_ms([&] { r = sk::solve_cvp_adaptive(basis, target, a.seed, cfg); });
  json report{{"command", "cvp"},
              {"dimension", basis.dimension()},
              {"seed", a.seed},
              {"distance", r.distance},
              {"coefficients", coeffs_json(r.closest.coeffs)},
              {"telemetry",
               {{"lambda1", r.lambda1.value},
                {"lambda1_source", sk::to_string(r.lambda1.source)},
                {"iterations", r.trace.size()},
                {"initial_list_size", r.initial_size},
                {"peak_zero_size", r.peak_zero_size},
                {"peak_target_size", r.peak_target_size},
                {"wall_ms", ms}}}};
  bool mismatch = false;
  if (a.verify && oracle_allowed(basis.dimension())) {
    const double oracle = (sk::enumerate_cvp(basis, target).coords - target.coords).norm();
    report["oracle_distance"] = oracle;
    report["verified"] = r.distance <= oracle * (1.0 + sk::kRelTol) + sk::kRelTol;
    mismatch = !report["verified"].get<bool>();
  }
  if (a.json) {
    std::cout << report.dump() << '\n';
  } else {
    std::cout << "distance " << r.distance << "\ncoefficients " << report["coefficients"].dump() << '\n';
    for (const auto& [k, v] : report["telemetry"].items()) std::cout << k << ' ' << v.dump() << '\n';
    if (report.contains("verified"))
      std::cout << "oracle_distance " << report["oracle_distance"].get<double>() << "\nverified "
                << report["verified"].dump() << '\n';
  }
  return mismatch ? kMismatch : kOk;
}

// ---------------------------------------------------------------- cvpp

struct PreprocessArgs {
  std::string basis, out;
  std::string mode = "exact";
  std::optional<double> delta, kappa, alpha_override, lsf_u;
  std::size_t filters = 0;
  std::uint64_t seed = 1;
  bool json = false;
};

sk::CvppMode parse_mode(const PreprocessArgs& a) {
  if (a.mode == "bdd") {
    if (!a.delta) throw CLI::ValidationError("--mode bdd needs --delta");
    return sk::CvppMode::bdd(*a.delta);
  }
  if (a.mode == "approx") {
    if (!a.kappa) throw CLI::ValidationError("--mode approx needs --kappa");
    return sk::CvppMode::approx(*a.kappa);
  }
  return sk::CvppMode::exact();
}

int cmd_preprocess(const PreprocessArgs& a) {
  const sk::Basis basis = sk::load_basis_file(a.basis);
  const sk::CvppMode mode = parse_mode(a);
  sk::CvppParams params = sk::CvppParams::for_mode(mode);
  sk::PreprocessOptions opt;
  if (a.alpha_override) {
    params.alpha = *a.alpha_override;
    opt.allow_uncertified = true;
    if (params.alpha < sk::min_alpha(mode))
      warn("alpha " + std::to_string(params.alpha) + " is below the " + mode.describe() + " radius " +
           std::to_string(sk::min_alpha(mode)) + "; results are not certified");
  }
  if (a.lsf_u) {
    opt.use_lsf = true;
    opt.lsf_u = *a.lsf_u;
    opt.num_filters = a.filters;
  }
  opt.sieve.progress = [](const sk::GaussProgressRecord& r) {
    progress({{"event", "gauss"}, {"iteration", r.iteration}, {"list_size", r.list_size},
              {"min_norm", r.min_norm}, {"collisions", r.collisions}});
  };
  std::optional<sk::PreprocessedList> list;
  const double ms = sk::harness::timed_ms([&] { list.emplace(sk::preprocess(basis, params, a.seed, opt)); });
  {
    auto out = open_out(a.out);
    sk::save_preprocessed(out, *list);
    if (!out) throw sk::ParseError("write to " + a.out + " failed");
  }
  json report{{"command", "cvpp-preprocess"},
              {"dimension", basis.dimension()},
              {"mode", mode.describe()},
              {"alpha", list->alpha()},
              {"lambda1", list->lambda1().value},
              {"list_size", list->size()},
              {"lsf", list->lsf().has_value()},
              {"certified", list->metadata().certified},
              {"samples", list->metadata().samples},
              {"collisions", list->metadata().collisions},
              {"file", a.out},
              {"wall_ms", ms}};
  if (a.json) {
    std::cout << report.dump() << '\n';
  } else {
    for (const auto& [k, v] : report.items()) std::cout << k << ' ' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  return kOk;
}

struct QueryArgs {
  std::string list, basis, target, batch;
  bool verify = false;
  bool json = false;
};

int cmd_query(const QueryArgs& a) {
  const sk::Basis basis = sk::load_basis_file(a.basis);
  const sk::PreprocessedList list = sk::load_preprocessed_file(a.list, basis);
  std::vector<sk::TargetVector> targets;
  const std::string& path = a.batch.empty() ? a.target : a.batch;
  {
    std::ifstream in(path);
    if (!in) throw sk::ParseError("cannot open target file " + path);
    if (a.batch.empty())
      targets.push_back(sk::read_target(in, basis.dimension()));
    else
      targets = sk::read_targets(in, basis.dimension());
  }
  const bool verify = a.verify && oracle_allowed(basis.dimension());
  const sk::CvppMode mode = list.params().mode;
  constexpr double kBinWidth = 0.05;
  std::map<long, std::size_t> histogram;
  json solutions = json::array();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const sk::CvppSolution s = sk::solve(list, basis, targets[i]);
    json row{{"index", i},
             {"distance", s.distance},
             {"coefficients", coeffs_json(s.vector.coeffs)},
             {"beta", s.certificate.beta},
             {"within_bound", s.certificate.within_bound},
             {"used_index", s.certificate.used_index},
             {"reductions", s.certificate.reduction_count}};
    ++histogram[static_cast<long>(std::floor(s.certificate.beta / kBinWidth))];
    if (verify) {
      const double oracle = (sk::enumerate_cvp(basis, targets[i]).coords - targets[i].coords).norm();
      const double bound = mode.kind == sk::CvppMode::Kind::approx ? mode.param * oracle : oracle;
      row["oracle_distance"] = oracle;
      row["verified"] = s.distance <= bound * (1.0 + sk::kRelTol) + sk::kRelTol;
      if (!row["verified"].get<bool>()) ++mismatches;
    }
    progress({{"event", "query"}, {"index", i}, {"beta", s.certificate.beta}});
    solutions.push_back(row);
  }
  json hist = json::array();
  for (const auto& [bin, count] : histogram)
    hist.push_back({{"lo", bin * kBinWidth}, {"hi", (bin + 1) * kBinWidth}, {"count", count}});
  json report{{"command", "cvpp-query"},
              {"dimension", basis.dimension()},
              {"mode", mode.describe()},
              {"alpha", list.alpha()},
              {"list_size", list.size()},
              {"solutions", solutions},
              {"beta_histogram", hist}};
  if (verify) report["mismatches"] = mismatches;
  if (a.json) {
    std::cout << report.dump() << '\n';
  } else {
    std::cout << "# index distance beta within_bound reductions" << (verify ? " verified" : "") << '\n';
    for (const auto& s : solutions) {
      std::cout << s["index"] << ' ' << s["distance"].get<double>() << ' ' << s["beta"].get<double>() << ' '
                << s["within_bound"] << ' ' << s["reductions"];
      if (verify) std::cout << ' ' << s["verified"];
      std::cout << '\n';
    }
    std::cout << "# beta histogram\n";
    for (const auto& h : hist)
      std::cout << '[' << h["lo"].get<double>() << ", " << h["hi"].get<double>() << ") " << h["count"] << '\n';
  }
  return mismatches ? kMismatch : kOk;
}

// ---------------------------------------------------------------- asymptotics

struct AsymptoticsArgs {
  std::string problem = "cvpp";
  std::optional<double> param, u;
  int curve = 0;
  double max_space = 1.0;
  bool json = false;
};

json point_json(const sk::ComplexityPoint& p) {
  return {{"space_exp", p.space_exp}, {"preproc_exp", p.preproc_exp}, {"query_exp", p.query_exp}};
}

int cmd_asymptotics(const AsymptoticsArgs& a) {
  json report{{"command", "asymptotics"}, {"problem", a.problem}};
  if (a.problem == "svp" || a.problem == "adaptive") {
    if (a.problem == "svp") {
      report["time_exp"] = sk::svp_time_exponent();
      report["space_exp"] = sk::svp_space_exponent();
    } else {
      report.update(point_json(sk::adaptive_exponents()));
    }
  } else {
    const auto problem = a.problem == "cvpp" ? sk::TradeoffProblem::cvpp
                         : a.problem == "bdd" ? sk::TradeoffProblem::bdd
                                              : sk::TradeoffProblem::approx;
    double alpha = std::sqrt(2.0);
    if (problem != sk::TradeoffProblem::cvpp) {
      if (!a.param) throw CLI::ValidationError("--problem " + a.problem + " needs --param");
      alpha = sk::min_alpha(problem == sk::TradeoffProblem::bdd ? sk::CvppMode::bdd(*a.param)
                                                                : sk::CvppMode::approx(*a.param));
    }
    if (a.curve > 0) {
      sk::write_curve_csv(std::cout, sk::tradeoff_curve(problem, a.param.value_or(0.0), a.curve, a.max_space));
      return kOk;
    }
    const double u = a.u.value_or(sk::min_u(alpha));
    const sk::ComplexityPoint p =
        problem == sk::TradeoffProblem::cvpp ? sk::cvpp_tradeoff(u) : sk::list_tradeoff(alpha, u);
    report["alpha"] = alpha;
    report["u"] = u;
    if (a.param) report["param"] = *a.param;
    report.update(point_json(p));
  }
  if (a.json) {
    std::cout << report.dump() << '\n';
  } else {
    std::cout.setf(std::ios::fixed);
    std::cout.precision(6);
    for (const auto& [k, v] : report.items()) {
      if (v.is_number_float())
        std::cout << k << ' ' << v.get<double>() << '\n';
      else if (v.is_string())
        std::cout << k << ' ' << v.get<std::string>() << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string name, out, replay;
  std::vector<int> dims;
  std::vector<double> params;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  bool no_verify = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  namespace h = sk::harness;
  h::ExperimentRecord rec;
  bool mismatch = false;
  if (!a.replay.empty()) {
    std::ifstream in(a.replay);
    if (!in) throw sk::ParseError("cannot open record " + a.replay);
    h::ExperimentRecord stored;
    try {
      stored = json::parse(in).get<h::ExperimentRecord>();
    } catch (const json::exception& e) {
      throw sk::ParseError(std::string("malformed experiment record: ") + e.what());
    }
    rec = h::replay(stored);
    mismatch = !h::same_outcomes(stored, rec);
    if (mismatch) std::cerr << "replay differs from " << a.replay << '\n';
  } else {
    h::ExperimentOptions o;
    o.name = a.name;
    o.dims = a.dims;
    o.params = a.params;
    o.trials = a.trials;
    o.seed = a.seed;
    o.verify = !a.no_verify;
    o.progress = [](const json& e) {
      if (e.value("event", "") == "warning")
        warn(e["message"].get<std::string>());
      else
        progress(e);
    };
    rec = h::run_experiment(o);
  }
  const json record = rec;
  if (a.out.empty()) {
    std::cout << record.dump(2) << '\n';
  } else {
    auto out = open_out(a.out);
    out << record.dump(2) << '\n';
    std::cout << record["summary"].dump(2) << '\n';
  }
  return mismatch ? kMismatch : kOk;
}

// ---------------------------------------------------------------- generators

int cmd_gen_basis(int dim, std::uint64_t seed, const std::string& out) {
  const sk::Basis basis = sk::random_lattice(dim, seed);
  if (out.empty()) {
    sk::write_basis(std::cout, basis);
  } else {
    auto f = open_out(out);
    sk::write_basis(f, basis);
  }
  return kOk;
}

int cmd_gen_target(const std::string& basis_path, std::uint64_t seed, std::optional<double> delta, int count,
                   const std::string& out) {
  const sk::Basis basis = sk::load_basis_file(basis_path);
  std::ostringstream text;
  const double lambda1 = delta ? sk::lambda1_estimate(basis).value : 0.0;
  for (int i = 0; i < count; ++i) {
    sk::Rng rng(sk::subseed(seed, static_cast<std::uint64_t>(i)));
    sk::write_target(text, delta ? sk::plant_target(basis, *delta * lambda1, rng).target
                                 : sk::random_target(basis, rng));
  }
  if (out.empty()) {
    std::cout << text.str();
  } else {
    auto f = open_out(out);
    f << text.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice sieving toolkit: SVP, CVP, CVPP and exponent tables"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", g_verbose, "JSON-lines progress on stderr");

  const std::vector<std::string> algos{"nv", "gauss"}, scans{"lsf", "brute"};

  SvpArgs svp;
  auto* c_svp = app.add_subcommand("svp", "shortest vector by sieving");
  c_svp->add_option("basis", svp.basis, "basis file")->required();
  c_svp->add_option("--algo", svp.algo)->check(CLI::IsMember(algos));
  c_svp->add_option("--nns", svp.nns)->check(CLI::IsMember(scans));
  c_svp->add_option("--seed", svp.seed);
  c_svp->add_flag("--verify", svp.verify, "compare with enumeration (d <= 40)");
  c_svp->add_flag("--json", svp.json);

  CvpArgs cvp;
  auto* c_cvp = app.add_subcommand("cvp", "closest vector by the two-list sieve");
  c_cvp->add_option("basis", cvp.basis, "basis file")->required();
  c_cvp->add_option("target", cvp.target, "target file")->required();
  c_cvp->add_option("--nns", cvp.nns)->check(CLI::IsMember(scans));
  c_cvp->add_option("--seed", cvp.seed);
  c_cvp->add_flag("--verify", cvp.verify, "compare with enumeration (d <= 40)");
  c_cvp->add_flag("--json", cvp.json);

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("cvpp-preprocess", "build a short-vector list file");
  c_pre->add_option("basis", pre.basis, "basis file")->required();
  c_pre->add_option("--out", pre.out, "list file")->required();
  c_pre->add_option("--mode", pre.mode)->check(CLI::IsMember({"exact", "bdd", "approx"}));
  c_pre->add_option("--delta", pre.delta, "BDD radius in units of lambda_1");
  c_pre->add_option("--kappa", pre.kappa, "approximation factor");
  c_pre->add_option("--alpha-override", pre.alpha_override, "list radius factor; may be uncertified");
  c_pre->add_option("--lsf-u", pre.lsf_u, "build a filter index with this u");
  c_pre->add_option("--filters", pre.filters, "filter count of the index (default: calibrated)")
      ->check(CLI::PositiveNumber);
  c_pre->add_option("--seed", pre.seed);
  c_pre->add_flag("--json", pre.json);

  QueryArgs query;
  auto* c_query = app.add_subcommand("cvpp-query", "answer CVP queries with a list file");
  c_query->add_option("list", query.list, "list file")->required();
  c_query->add_option("--basis", query.basis, "basis file the list was built for")->required();
  auto* o_target = c_query->add_option("--target", query.target, "single target file");
  auto* o_batch = c_query->add_option("--batch", query.batch, "file with one target per line");
  o_target->excludes(o_batch);
  c_query->add_flag("--verify", query.verify, "compare with enumeration (d <= 40)");
  c_query->add_flag("--json", query.json);

  AsymptoticsArgs asym;
  auto* c_asym = app.add_subcommand("asymptotics", "space/time exponents");
  c_asym->add_option("--problem", asym.problem)
      ->check(CLI::IsMember({"svp", "adaptive", "cvpp", "bdd", "approx"}));
  c_asym->add_option("--param", asym.param, "delta (bdd) or kappa (approx)");
  c_asym->add_option("--u", asym.u, "filter parameter; default is the space-minimal u");
  c_asym->add_option("--curve", asym.curve, "emit N tradeoff points as CSV")->check(CLI::Range(2, 1000000));
  c_asym->add_option("--max-space", asym.max_space, "space exponent at the end of the curve");
  c_asym->add_flag("--json", asym.json);

  ExperimentArgs exp;
  auto* c_exp = app.add_subcommand("experiment", "run or replay a named experiment");
  auto* o_name = c_exp->add_option("--name", exp.name)->check(CLI::IsMember(sk::harness::experiment_names()));
  c_exp->add_option("--dims", exp.dims)->delimiter(',');
  c_exp->add_option("--trials", exp.trials);
  c_exp->add_option("--seed", exp.seed);
  c_exp->add_option("--params", exp.params, "experiment parameters (delta, kappa, norms, point count)")
      ->delimiter(',');
  c_exp->add_flag("--no-verify", exp.no_verify);
  c_exp->add_option("--out", exp.out, "record file");
  auto* o_replay = c_exp->add_option("--replay", exp.replay, "rerun a stored record and compare");
  o_name->excludes(o_replay);

  int gen_dim = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* c_gen = app.add_subcommand("gen-basis", "random prime-determinant basis");
  c_gen->add_option("--dim", gen_dim)->required()->check(CLI::Range(2, 1000));
  c_gen->add_option("--seed", gen_seed);
  c_gen->add_option("--out", gen_out);

  std::string gt_basis, gt_out;
  std::uint64_t gt_seed = 1;
  std::optional<double> gt_delta;
  int gt_count = 1;
  auto* c_gt = app.add_subcommand("gen-target", "random targets; planted at delta lambda_1 with --delta");
  c_gt->add_option("basis", gt_basis, "basis file")->required();
  c_gt->add_option("--seed", gt_seed);
  c_gt->add_option("--delta", gt_delta);
  c_gt->add_option("--count", gt_count)->check(CLI::Range(1, 1000000));
  c_gt->add_option("--out", gt_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*c_svp) return cmd_svp(svp);
    if (*c_cvp) return cmd_cvp(cvp);
    if (*c_pre) return cmd_preprocess(pre);
    if (*c_query) {
      if (query.target.empty() == query.batch.empty()) throw CLI::ValidationError("give --target or --batch");
      return cmd_query(query);
    }
    if (*c_asym) return cmd_asymptotics(asym);
    if (*c_exp) {
      if (exp.name.empty() && exp.replay.empty()) throw CLI::ValidationError("give --name or --replay");
      return cmd_experiment(exp);
    }
    if (*c_gen) return cmd_gen_basis(gen_dim, gen_seed, gen_out);
    if (*c_gt) return cmd_gen_target(gt_basis, gt_seed, gt_delta, gt_count, gt_out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::length_error& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kResourceCap;
  } catch (const sk::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::logic_error& e) {  // invalid_argument, domain_error
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
