#include "sievekit/harness.hpp"

#include "sievekit/cvpp.hpp"
#include "sievekit/enumerate.hpp"
#include "sievekit/lsf.hpp"
#include "sievekit/sampler.hpp"
#include "sievekit/sieve.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <stdexcept>

namespace sievekit::harness {

int worker_count() {
  if (const char* env = std::getenv("SIEVEKIT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void to_json(json& j, const TrialOutcome& t) {
  j = json{{"id", t.id}, {"success", t.success}, {"metrics", t.metrics}, {"wall_ms", t.wall_ms}};
}

void from_json(const json& j, TrialOutcome& t) {
  j.at("id").get_to(t.id);
  j.at("success").get_to(t.success);
  t.metrics = j.at("metrics");
  t.wall_ms = j.value("wall_ms", 0.0);
}

void to_json(json& j, const ExperimentRecord& r) {
  j = json{{"experiment", r.id}, {"config", r.config}, {"trials", r.trials}, {"summary", r.summary}};
}

void from_json(const json& j, ExperimentRecord& r) {
  j.at("experiment").get_to(r.id);
  r.config = j.at("config");
  j.at("trials").get_to(r.trials);
  r.summary = j.value("summary", json::object());
}

bool same_outcomes(const ExperimentRecord& a, const ExperimentRecord& b) {
  if (a.id != b.id || a.trials.size() != b.trials.size()) return false;
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    const auto &x = a.trials[i], &y = b.trials[i];
    if (x.id != y.id || x.success != y.success || x.metrics != y.metrics) return false;
  }
  return true;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"listsize",  "collisions", "bdd-sweep",
                                              "kappa-sweep", "lemma2-mc", "lsf-recall"};
  return names;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw std::invalid_argument("line fit needs two distinct x values");
  return {sxy / sxx, my - sxy / sxx * mx};
}

namespace {

constexpr std::size_t kLemma2Batch = 10000;

std::uint64_t lattice_seed(std::uint64_t seed, std::size_t j) { return subseed(subseed(seed, 0), j); }
std::uint64_t group_seed(std::uint64_t seed, std::size_t g) { return subseed(subseed(seed, 1), g); }
std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) { return subseed(subseed(seed, 2), i); }

struct Context {
  ExperimentOptions opt;
  int workers = 1;
  std::vector<std::string> warnings;
  std::mutex mutex;

  void emit(json event) {
    if (!opt.progress) return;
    event["experiment"] = opt.name;
    std::lock_guard lock(mutex);
    opt.progress(event);
  }

  void warn(const std::string& message) {
    warnings.push_back(message);
    emit({{"event", "warning"}, {"message", message}});
  }

  bool oracle(int d) {
    if (!opt.verify) return false;
    if (d > kOracleMaxDimension) {
      warn("d = " + std::to_string(d) + " exceeds the oracle limit; verification skipped");
      return false;
    }
    return true;
  }

  template <typename F>
  std::vector<TrialOutcome> trials(std::size_t n, F&& fn) {
    return run_trials(
        n,
        [&](std::size_t i) {
          TrialOutcome t;
          t.id = i;
          t.wall_ms = timed_ms([&] { fn(i, t); });
          emit({{"event", "trial"}, {"id", i}, {"success", t.success}, {"wall_ms", t.wall_ms}});
          return t;
        },
        workers);
  }
};

double rel_close(double a, double b) { return std::abs(a - b) <= kRelTol * std::max(1.0, std::abs(b)); }

json group_summary(const std::vector<TrialOutcome>& trials, const std::vector<std::string>& keys) {
  struct Group {
    json row;
    std::size_t trials = 0, successes = 0;
  };
  std::map<std::vector<double>, Group> groups;
  for (const auto& t : trials) {
    std::vector<double> k;
    for (const auto& key : keys) k.push_back(t.metrics.at(key).get<double>());
    auto& g = groups[k];
    if (g.trials++ == 0)
      for (const auto& key : keys) g.row[key] = t.metrics.at(key);
    g.successes += t.success ? 1 : 0;
  }
  json out = json::array();
  for (auto& [k, g] : groups) {
    g.row["trials"] = g.trials;
    g.row["successes"] = g.successes;
    g.row["rate"] = static_cast<double>(g.successes) / static_cast<double>(g.trials);
    out.push_back(g.row);
  }
  return out;
}

ExperimentRecord listsize(Context& ctx) {
  const auto& o = ctx.opt;
  std::vector<bool> verify;
  for (int d : o.dims) verify.push_back(ctx.oracle(d));
  ExperimentRecord rec;
  rec.trials = ctx.trials(o.dims.size() * o.trials, [&](std::size_t i, TrialOutcome& t) {
    const std::size_t j = i / o.trials;
    const int d = o.dims[j];
    const Basis basis = random_lattice(d, lattice_seed(o.seed, i));
    const GaussSieveResult r = gauss_sieve(basis, TerminationRule{}, trial_seed(o.seed, i));
    t.metrics = {{"dimension", d},
                 {"list_size", r.list.size()},
                 {"peak_list_size", r.stats.peak_list_size},
                 {"samples", r.stats.samples},
                 {"collisions", r.stats.collisions},
                 {"reductions", r.stats.reductions},
                 {"min_norm", r.shortest.norm()},
                 {"certified", r.stats.certified}};
    t.success = r.stats.certified;
    if (verify[j]) {
      const double lambda1 = enumerate_svp(basis).norm();
      t.metrics["lambda1"] = lambda1;
      t.success = t.success && rel_close(r.shortest.norm(), lambda1);
    }
  });
  std::vector<double> xs, ys;
  for (const auto& t : rec.trials) {
    xs.push_back(t.metrics["dimension"].get<double>());
    ys.push_back(std::log2(t.metrics["list_size"].get<double>()));
  }
  rec.summary["groups"] = group_summary(rec.trials, {"dimension"});
  for (auto& g : rec.summary["groups"]) {
    double sum = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] == g["dimension"].get<double>()) sum += ys[i];
    g["mean_log2_list_size"] = sum / g["trials"].get<double>();
  }
  if (o.dims.size() >= 2) {
    const LineFit fit = fit_line(xs, ys);
    rec.summary["slope"] = fit.slope;
    rec.summary["intercept"] = fit.intercept;
  }
  return rec;
}

struct ListGroup {
  std::size_t lattice = 0;
  double param = 0.0;
};

// Builds one list per (dimension, param) group. `mode_of` maps the group
// param to the CVPP mode; `alpha_of` picks the list radius.
template <typename Mode, typename Alpha>
std::vector<std::pair<Basis, PreprocessedList>> build_lists(Context& ctx, const std::vector<ListGroup>& groups,
                                                           Mode mode_of, Alpha alpha_of) {
  std::vector<std::pair<Basis, PreprocessedList>> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int d = ctx.opt.dims[groups[g].lattice];
    Basis basis = random_lattice(d, lattice_seed(ctx.opt.seed, groups[g].lattice));
    const CvppMode mode = mode_of(groups[g].param);
    PreprocessOptions popt;
    popt.allow_uncertified = true;
    double ms = 0;
    std::optional<PreprocessedList> list;
    ms = timed_ms([&] { list.emplace(preprocess(basis, {alpha_of(mode), mode}, group_seed(ctx.opt.seed, g), popt)); });
    ctx.emit({{"event", "preprocess"}, {"group", g}, {"dimension", d}, {"param", groups[g].param},
              {"list_size", list->size()}, {"wall_ms", ms}});
    out.emplace_back(std::move(basis), std::move(*list));
  }
  return out;
}

json list_summary(const std::vector<ListGroup>& groups, const std::vector<std::pair<Basis, PreprocessedList>>& lists) {
  json out = json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& l = lists[g].second;
    out.push_back({{"dimension", l.dimension()},
                   {"param", groups[g].param},
                   {"alpha", l.alpha()},
                   {"lambda1", l.lambda1().value},
                   {"list_size", l.size()},
                   {"certified", l.metadata().certified}});
  }
  return out;
}

ExperimentRecord collisions(Context& ctx) {
  const auto& o = ctx.opt;
  std::vector<ListGroup> groups;
  for (std::size_t j = 0; j < o.dims.size(); ++j) groups.push_back({j, 0.0});
  const auto lists = build_lists(
      ctx, groups, [](double) { return CvppMode::exact(); }, [](const CvppMode&) { return std::sqrt(4.0 / 3.0); });
  const std::size_t per_dim = o.params.size() * o.trials;
  ExperimentRecord rec;
  rec.trials = ctx.trials(o.dims.size() * per_dim, [&](std::size_t i, TrialOutcome& t) {
    const auto& [basis, list] = lists[i / per_dim];
    const double delta = o.params[(i % per_dim) / o.trials];
    Rng rng(trial_seed(o.seed, i));
    const PlantedTarget p = plant_target(basis, delta * list.lambda1().value, rng);
    const ReducedTarget r = reduce_target(list, basis, p.target);
    t.success = r.lattice_part.coeffs == p.planted.coeffs;
    t.metrics = {{"dimension", basis.dimension()},
                 {"delta", delta},
                 {"beta", r.beta},
                 {"reductions", r.reduction_count}};
  });
  rec.summary["groups"] = group_summary(rec.trials, {"dimension", "delta"});
  rec.summary["lists"] = list_summary(groups, lists);
  return rec;
}

// bdd-sweep and kappa-sweep share the group layout: one list per
// (dimension, param) at the radius min_alpha(mode).
ExperimentRecord sweep(Context& ctx, bool bdd) {
  const auto& o = ctx.opt;
  std::vector<ListGroup> groups;
  std::vector<bool> verify;
  for (std::size_t j = 0; j < o.dims.size(); ++j) {
    verify.push_back(ctx.oracle(o.dims[j]));
    for (double p : o.params) groups.push_back({j, p});
  }
  auto mode_of = [bdd](double p) { return bdd ? CvppMode::bdd(p) : CvppMode::approx(p); };
  const auto lists = build_lists(ctx, groups, mode_of, [](const CvppMode& m) { return min_alpha(m); });
  ExperimentRecord rec;
  rec.trials = ctx.trials(groups.size() * o.trials, [&](std::size_t i, TrialOutcome& t) {
    const std::size_t g = i / o.trials;
    const auto& [basis, list] = lists[g];
    const double param = groups[g].param;
    Rng rng(trial_seed(o.seed, i));
    std::optional<PlantedTarget> planted;
    TargetVector target;
    if (bdd) {
      planted = plant_target(basis, param * list.lambda1().value, rng);
      target = planted->target;
    } else {
      target = random_target(basis, rng);
    }
    const CvppSolution s = solve(list, basis, target);
    t.metrics = {{"dimension", basis.dimension()},
                 {bdd ? "delta" : "kappa", param},
                 {"beta", s.certificate.beta},
                 {"distance", s.distance},
                 {"reductions", s.certificate.reduction_count},
                 {"within_bound", s.certificate.within_bound}};
    if (verify[groups[g].lattice]) {
      const double oracle = (enumerate_cvp(basis, target).coords - target.coords).norm();
      t.metrics["oracle_distance"] = oracle;
      const double bound = bdd ? oracle : param * oracle;
      t.success = s.distance <= bound * (1.0 + kRelTol) + kRelTol;
    } else {
      t.success = bdd ? s.vector.coeffs == planted->planted.coeffs : s.certificate.within_bound;
    }
  });
  rec.summary["groups"] = group_summary(rec.trials, {"dimension", bdd ? "delta" : "kappa"});
  rec.summary["lists"] = list_summary(groups, lists);
  return rec;
}

ExperimentRecord lemma2(Context& ctx) {
  const auto& o = ctx.opt;
  if (o.params.size() != 2 || !(o.params[0] > 0) || !(o.params[1] > 0))
    throw std::invalid_argument("lemma2-mc params are v_norm,w_norm (both positive)");
  const double vn = o.params[0], wn = o.params[1];
  const std::size_t batches = (o.trials + kLemma2Batch - 1) / kLemma2Batch;
  ExperimentRecord rec;
  rec.trials = ctx.trials(o.dims.size() * batches, [&](std::size_t i, TrialOutcome& t) {
    const int d = o.dims[i / batches];
    const std::size_t b = i % batches;
    const std::size_t samples = std::min(kLemma2Batch, o.trials - b * kLemma2Batch);
    Rng rng(trial_seed(o.seed, i));
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const RealVector v = random_unit_vector(d, rng) * vn;
      const RealVector w = random_unit_vector(d, rng) * wn;
      if ((v - w).squaredNorm() < v.squaredNorm()) ++hits;
    }
    t.success = true;
    t.metrics = {{"dimension", d}, {"samples", samples}, {"hits", hits}};
  });
  json groups = json::array();
  for (std::size_t j = 0; j < o.dims.size(); ++j) {
    std::size_t samples = 0, hits = 0;
    for (std::size_t b = 0; b < batches; ++b) {
      samples += rec.trials[j * batches + b].metrics["samples"].get<std::size_t>();
      hits += rec.trials[j * batches + b].metrics["hits"].get<std::size_t>();
    }
    const double rate = static_cast<double>(hits) / static_cast<double>(samples);
    const double predicted = reducibility_probability(vn, wn, o.dims[j]);
    groups.push_back({{"dimension", o.dims[j]},
                      {"samples", samples},
                      {"hits", hits},
                      {"rate", rate},
                      {"predicted", predicted},
                      {"ratio", predicted > 0 ? rate / predicted : 0.0}});
  }
  rec.summary["groups"] = groups;
  return rec;
}

ExperimentRecord lsf_recall(Context& ctx) {
  const auto& o = ctx.opt;
  if (o.params.size() != 1 || !(o.params[0] >= 2))
    throw std::invalid_argument("lsf-recall params are the point count (>= 2)");
  const auto points = static_cast<std::size_t>(o.params[0]);
  const double theta = std::numbers::pi / 3, u = 1.0, angle = theta - 0.05;
  std::vector<std::size_t> filters;
  for (int d : o.dims) filters.push_back(default_num_filters(d, theta, u));
  ExperimentRecord rec;
  rec.trials = ctx.trials(o.dims.size() * o.trials, [&](std::size_t i, TrialOutcome& t) {
    const std::size_t j = i / o.trials;
    const int d = o.dims[j];
    const std::uint64_t seed = trial_seed(o.seed, i);
    Rng rng(subseed(seed, 0));
    LsfIndex index(d, LsfParams::make(theta, u, filters[j]), subseed(seed, 1));
    const RealVector x = random_unit_vector(d, rng);
    RealVector z = random_unit_vector(d, rng);
    z -= z.dot(x) * x;
    z.normalize();
    const RealVector y = std::cos(angle) * x + std::sin(angle) * z;
    RealMatrix all(points, d);
    all.row(0) = x.transpose();
    for (std::size_t k = 1; k < points; ++k) all.row(k) = random_unit_vector(d, rng).transpose();
    std::vector<LsfIndex::Id> ids(points);
    for (std::size_t k = 0; k < points; ++k) ids[k] = k;
    index.insert_batch(ids, all);
    const auto candidates = index.query_candidates(y);
    t.success = std::find(candidates.begin(), candidates.end(), LsfIndex::Id{0}) != candidates.end();
    t.metrics = {{"dimension", d}, {"candidates", candidates.size()}, {"num_filters", filters[j]}};
  });
  rec.summary["groups"] = group_summary(rec.trials, {"dimension"});
  rec.summary["theta"] = theta;
  rec.summary["u"] = u;
  rec.summary["planted_angle"] = angle;
  rec.summary["points"] = points;
  return rec;
}

void apply_defaults(ExperimentOptions& o) {
  struct Defaults {
    std::vector<int> dims;
    std::size_t trials;
    std::vector<double> params;
  };
  const std::vector<int> lattice_dims{20, 24, 28, 30};
  static const std::map<std::string, Defaults> table{
      {"listsize", {lattice_dims, 5, {}}},
      {"collisions", {lattice_dims, 50, {0.01, 0.1, 0.5}}},
      {"bdd-sweep", {lattice_dims, 20, {0.25, 0.5, 0.75}}},
      {"kappa-sweep", {lattice_dims, 20, {1.5, 2.0, 3.0}}},
      {"lemma2-mc", {{20, 40}, 100000, {1.0, 1.0}}},
      {"lsf-recall", {{40}, 100, {2000}}},
  };
  const auto it = table.find(o.name);
  if (it == table.end()) throw std::invalid_argument("unknown experiment '" + o.name + "'");
  if (o.dims.empty()) o.dims = it->second.dims;
  if (o.trials == 0) o.trials = it->second.trials;
  if (o.params.empty()) o.params = it->second.params;
  for (int d : o.dims)
    if (d < 2) throw std::invalid_argument("experiment dimensions must be >= 2");
}

}  // namespace

ExperimentRecord run_experiment(const ExperimentOptions& options) {
  Context ctx;
  ctx.opt = options;
  apply_defaults(ctx.opt);
  ctx.workers = ctx.opt.workers > 0 ? ctx.opt.workers : worker_count();
  const auto& o = ctx.opt;

  ExperimentRecord rec;
  if (o.name == "listsize") rec = listsize(ctx);
  else if (o.name == "collisions") rec = collisions(ctx);
  else if (o.name == "bdd-sweep") rec = sweep(ctx, true);
  else if (o.name == "kappa-sweep") rec = sweep(ctx, false);
  else if (o.name == "lemma2-mc") rec = lemma2(ctx);
  else rec = lsf_recall(ctx);

  rec.id = o.name;
  rec.config = {{"name", o.name}, {"dims", o.dims},     {"trials", o.trials},
                {"seed", o.seed}, {"params", o.params}, {"verify", o.verify}};
  std::size_t successes = 0;
  for (const auto& t : rec.trials) successes += t.success ? 1 : 0;
  rec.summary["trials"] = rec.trials.size();
  rec.summary["successes"] = successes;
  rec.summary["warnings"] = ctx.warnings;
  return rec;
}

ExperimentRecord replay(const ExperimentRecord& record, int workers) {
  ExperimentOptions o;
  const json& c = record.config;
  c.at("name").get_to(o.name);
  c.at("dims").get_to(o.dims);
  c.at("trials").get_to(o.trials);
  c.at("seed").get_to(o.seed);
  c.at("params").get_to(o.params);
  c.at("verify").get_to(o.verify);
  o.workers = workers;
  return run_experiment(o);
}

}  // namespace sievekit::harness
