// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 if any
// selected criterion fails.

#include "sievekit/adaptive_cvp.hpp"
#include "sievekit/asymptotics.hpp"
#include "sievekit/cvpp.hpp"
#include "sievekit/enumerate.hpp"
#include "sievekit/harness.hpp"
#include "sievekit/lsf.hpp"
#include "sievekit/sampler.hpp"
#include "sievekit/sieve.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace sievekit;
namespace hx = sievekit::harness;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s = %.6f (want %.6f +- %.0e)", what.c_str(), got, want, tol);
    expect(std::abs(got - want) <= tol, buf);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  Verdict verdict() const {
    std::string d;
    for (const auto& n : notes_) d += (d.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) d += (d.empty() ? "failed: " : "; failed: ") + f;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_, failures_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// A constant printed to 3 decimals, read as either rounded or truncated.
bool printed3(double x, double printed) {
  return std::abs(std::round(x * 1000) / 1000 - printed) < 1e-12 ||
         std::abs(std::floor(x * 1000) / 1000 - printed) < 1e-12;
}

double oracle_distance(const Basis& b, const TargetVector& t) {
  return (enumerate_cvp(b, t).coords - t.coords).norm();
}

bool within_budget(Checks& c, double ms, double budget_ms) {
  c.note(fmt("%.1f s", ms / 1000));
  c.expect(ms < budget_ms, fmt("runtime %.1f s over the %.0f s budget", ms / 1000, budget_ms / 1000));
  return ms < budget_ms;
}

Verdict exponent_regression() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    c.expect(printed3(svp_space_exponent(), 0.208), fmt("svp space exponent %.6f vs 0.208", svp_space_exponent()));
    c.expect(printed3(svp_time_exponent(), 0.292), fmt("svp time exponent %.6f vs 0.292", svp_time_exponent()));
    const NnsExponents e = compute_exponents(std::numbers::pi / 3, 1.0);
    c.expect(printed3(e.space_exp(), 0.292), fmt("svp filter space %.6f vs 0.292", e.space_exp()));
    c.expect(printed3(e.query_exp(), 0.084), fmt("svp filter query %.6f vs 0.084", e.query_exp()));
    c.note(fmt("filter query exponent %.6f (printed 0.084, truncated)", e.query_exp()));

    const double tol = 5e-5;
    const ComplexityPoint lo = cvpp_tradeoff(std::numbers::sqrt2 / 2);
    c.near(lo.space_exp, 0.5, tol, "cvpp space at u=sqrt2/2");
    c.near(lo.query_exp, 0.2925, tol, "cvpp query at u=sqrt2/2");
    const ComplexityPoint mid = cvpp_tradeoff(1.0);
    c.near(mid.space_exp, 0.6358, tol, "cvpp space at u=1");
    c.near(mid.query_exp, 0.1358, tol, "cvpp query at u=1");
    const ComplexityPoint hi = tradeoff_curve(TradeoffProblem::cvpp, 0, 2).back().point;
    c.near(hi.space_exp, 1.0, tol, "cvpp space at the 2^d end");
    c.near(hi.query_exp, 0.0594, tol, "cvpp query at the 2^d end");

    const double a_half = min_alpha(CvppMode::bdd(0.5));
    c.near(a_half, 1.1976, tol, "alpha(delta=1/2)");
    const ComplexityPoint half = bdd_tradeoff(0.5, min_u(a_half));
    c.near(half.space_exp, 0.2602, tol, "bdd(1/2) space");
    c.near(half.query_exp, 0.1908, tol, "bdd(1/2) query");
    const double a_zero = min_alpha(CvppMode::bdd(1e-9));
    const ComplexityPoint zero = bdd_tradeoff(1e-9, min_u(a_zero));
    c.near(zero.space_exp, 0.2075, tol, "bdd(0) space");
    c.near(zero.query_exp, 0.1610, tol, "bdd(0) query");

    c.near(min_alpha(CvppMode::approx(1.0)), std::numbers::sqrt2, tol, "alpha(kappa=1)");
    // kappa with alpha(kappa) = alpha(delta = 1/2), found by bisection.
    double klo = 1.0, khi = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double m = 0.5 * (klo + khi);
      (min_alpha(CvppMode::approx(m)) > a_half ? klo : khi) = m;
    }
    c.near(klo, 1.0882, 1e-3, "kappa matching delta=1/2");
    c.near(min_alpha(CvppMode::approx(std::sqrt(4.0 / 3.0))), a_zero, tol, "alpha(kappa=sqrt(4/3)) vs alpha(delta->0)");
  });
  within_budget(c, ms, 1000);
  return c.verdict();
}

Verdict cross_module_identity() {
  Checks c;
  double worst = 0;
  const double ms = hx::timed_ms([&] {
    auto compare = [&](double alpha, const std::function<ComplexityPoint(double)>& at, const std::string& name) {
      const double theta = std::asin(1.0 / alpha);
      const double lo = min_u(alpha), hi = max_u(alpha);
      for (int i = 0; i < 50; ++i) {
        const double u = lo + (hi - lo) * 0.98 * i / 49.0;
        const ComplexityPoint p = at(u);
        const NnsExponents e = compute_exponents(theta, u);
        const double err = std::max({std::abs(p.space_exp - e.space_exp()), std::abs(p.query_exp - e.query_exp()),
                                     std::abs(e.n_exponent - std::log2(alpha))});
        worst = std::max(worst, err);
        c.expect(err <= 1e-9, name + fmt(" mismatch %.2e at u=%.4f", err, u));
      }
    };
    const double theta_exact = std::asin(1.0 / std::numbers::sqrt2);
    c.expect(std::abs(theta_exact - std::numbers::pi / 4) <= 1e-12, "exact cvpp filter angle is pi/4");
    c.expect(std::abs(compute_exponents(std::numbers::pi / 4, 1.0).n_exponent - 0.5) <= 1e-12,
             "n exponent at pi/4 is 1/2");
    compare(std::numbers::sqrt2, cvpp_tradeoff, "cvpp");
    compare(min_alpha(CvppMode::bdd(0.5)), [](double u) { return bdd_tradeoff(0.5, u); }, "bdd(1/2)");
    compare(min_alpha(CvppMode::approx(2.0)), [](double u) { return approx_tradeoff(2.0, u); }, "approx(2)");
  });
  c.note(fmt("150 points, max deviation %.2e", worst));
  within_budget(c, ms, 1000);
  return c.verdict();
}

Verdict svp_correctness() {
  Checks c;
  int gauss = 0, nv = 0;
  const double ms = hx::timed_ms([&] {
    const auto hits = hx::run_trials(20, [](std::size_t i) {
      const Basis b = random_lattice(30, 3000 + i);
      const double l1 = enumerate_svp(b).norm();
      const double g = gauss_sieve(b, {}, subseed(i, 1)).shortest.norm();
      double v = 0;
      try {
        v = run_nv_sieve(b, {}, subseed(i, 2)).shortest.norm();
      } catch (const StarvationError&) {
        v = -1;
      }
      return std::pair<bool, bool>{std::abs(g - l1) <= 1e-9 * l1, std::abs(v - l1) <= 1e-9 * l1};
    });
    for (auto [g, v] : hits) {
      gauss += g;
      nv += v;
    }
  });
  c.note(fmt("gauss %.0f/20, nv %.0f/20 at d=30", gauss, nv));
  c.expect(gauss >= 19, "gauss sieve below 19/20");
  c.expect(nv >= 18, "nv sieve below 18/20");
  within_budget(c, ms, 600e3);
  return c.verdict();
}

Verdict list_size_scaling() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    hx::ExperimentOptions o;
    o.name = "listsize";
    o.dims = {30, 35, 40};
    o.trials = 5;
    o.seed = 4000;
    const hx::ExperimentRecord r = hx::run_experiment(o);
    const double slope = r.summary.at("slope");
    std::string sizes;
    for (const auto& g : r.summary.at("groups"))
      sizes += fmt(" d=%.0f:%.2f", g.at("dimension").get<double>(), g.at("mean_log2_list_size").get<double>());
    c.note(fmt("slope %.4f (target 0.2075, band [0.17, 0.24])", slope) + ", mean log2|L|" + sizes);
    c.expect(slope >= 0.17 && slope <= 0.24, "slope outside [0.17, 0.24]");
    c.expect(r.summary.at("successes").get<int>() == 15, "not every run certified and matched lambda_1");
  });
  within_budget(c, ms, 1800e3);
  return c.verdict();
}

Verdict adaptive_cvp() {
  Checks c;
  int hits = 0;
  const double ms = hx::timed_ms([&] {
    const auto ok = hx::run_trials(20, [](std::size_t i) {
      const Basis b = random_lattice(24, 5000 + i);
      Rng rng(subseed(5000, i));
      const TargetVector t = random_target(b, rng);
      const double got = solve_cvp_adaptive(b, t, subseed(i, 1)).distance;
      return got <= oracle_distance(b, t) * (1 + 1e-9) + 1e-9;
    });
    hits = static_cast<int>(std::count(ok.begin(), ok.end(), true));
  });
  c.note(fmt("%.0f/20 oracle matches at d=24", hits));
  c.expect(hits >= 18, "below 90%");
  within_budget(c, ms, 900e3);
  return c.verdict();
}

struct QueryStats {
  int successes = 0;
  std::vector<double> betas;
};

template <typename Query>
QueryStats run_queries(std::size_t n, std::uint64_t seed, Query&& query) {
  const auto out = hx::run_trials(n, [&](std::size_t i) {
    Rng rng(subseed(seed, i));
    return query(rng);
  });
  QueryStats s;
  for (auto [ok, beta] : out) {
    s.successes += ok;
    s.betas.push_back(beta);
  }
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Verdict exact_cvpp() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    const Basis b = random_lattice(28, 6000);
    const PreprocessedList main = preprocess(b, CvppParams::for_mode(CvppMode::exact()), 6001);
    PreprocessOptions loose;
    loose.allow_uncertified = true;
    const PreprocessedList control = preprocess(b, {std::sqrt(4.0 / 3.0), CvppMode::exact()}, 6002, loose);
    auto query = [&](const PreprocessedList& list) {
      return [&](Rng& rng) {
        const TargetVector t = random_target(b, rng);
        const CvppSolution s = solve(list, b, t);
        return std::pair<bool, double>{s.distance <= oracle_distance(b, t) * (1 + 1e-9) + 1e-9, s.certificate.beta};
      };
    };
    const QueryStats m = run_queries(50, 6003, query(main));
    const QueryStats k = run_queries(50, 6003, query(control));
    const double med = median(k.betas);
    c.note(fmt("alpha=sqrt2 list of %.0f: %.0f/50 oracle matches", main.size(), m.successes));
    c.note(fmt("control list of %.0f: %.0f/50, median beta %.4f", control.size(), k.successes, med));
    c.expect(m.successes >= 45, "alpha=sqrt2 success below 90%");
    c.expect(med >= 1.05 && med <= 1.25, "control median beta outside [1.05, 1.25]");
    c.expect(k.successes < m.successes, "control success not strictly lower");
  });
  within_budget(c, ms, 1800e3);
  return c.verdict();
}

Verdict bdd_approx() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    const Basis b = random_lattice(28, 7000);
    const double l1 = enumerate_svp(b).norm();
    const PreprocessedList bdd = preprocess(b, CvppParams::for_mode(CvppMode::bdd(0.5)), 7001);
    const QueryStats s = run_queries(50, 7002, [&](Rng& rng) {
      const PlantedTarget p = plant_target(b, 0.5 * l1, rng);
      const CvppSolution sol = solve(bdd, b, p.target);
      return std::pair<bool, double>{sol.distance <= oracle_distance(b, p.target) * (1 + 1e-9) + 1e-9,
                                     sol.certificate.beta};
    });
    const PreprocessedList approx = preprocess(b, CvppParams::for_mode(CvppMode::approx(2.0)), 7003);
    const QueryStats a = run_queries(50, 7004, [&](Rng& rng) {
      const TargetVector t = random_target(b, rng);
      const CvppSolution sol = solve(approx, b, t);
      return std::pair<bool, double>{sol.distance <= 2.0 * oracle_distance(b, t) * (1 + 1e-9), sol.certificate.beta};
    });
    c.note(fmt("bdd(1/2) list of %.0f: %.0f/50 at delta=1/2", bdd.size(), s.successes));
    c.note(fmt("approx(2) list of %.0f: %.0f/50 within 2x", approx.size(), a.successes));
    c.expect(s.successes >= 45, "bdd success below 90%");
    c.expect(a.successes >= 48, "approx success below 95%");
  });
  within_budget(c, ms, 1800e3);
  return c.verdict();
}

Verdict collisions() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    const Basis b = random_lattice(30, 8000);
    PreprocessOptions loose;
    loose.allow_uncertified = true;
    const PreprocessedList list = preprocess(b, {std::sqrt(4.0 / 3.0), CvppMode::exact()}, 8001, loose);
    const auto rates = collision_experiment(b, list, 50, 8002, {0.01, 0.5});
    c.note(fmt("list of %.0f: recovery %.2f at delta=0.01, %.2f at delta=0.5", list.size(), rates[0].rate(),
               rates[1].rate()));
    c.expect(rates[0].rate() >= 0.8, "delta=0.01 recovery below 0.8");
    c.expect(rates[0].rate() > rates[1].rate(), "delta=0.01 rate not above delta=0.5");
  });
  within_budget(c, ms, 600e3);
  return c.verdict();
}

Verdict lemma2_mc() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    for (auto [d, n] : {std::pair<int, std::size_t>{20, 100000}, {40, 10000000}}) {
      hx::ExperimentOptions o;
      o.name = "lemma2-mc";
      o.dims = {d};
      o.trials = n;
      o.seed = 9000;
      o.params = {1.0, 1.0};
      const auto g = hx::run_experiment(o).summary.at("groups").at(0);
      const double rate = g.at("rate"), predicted = g.at("predicted");
      c.note(fmt("d=%.0f: rate %.3e vs (3/4)^(d/2) = %.3e", d, rate, predicted) + fmt(" (ratio %.3f)", rate / predicted));
      c.expect(rate >= predicted / 2 && rate <= predicted * 2, "d=" + std::to_string(d) + " outside a factor 2");
    }
  });
  within_budget(c, ms, 300e3);
  return c.verdict();
}

Verdict lsf_recall() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    hx::ExperimentOptions o;
    o.name = "lsf-recall";
    o.seed = 10000;
    const auto r = hx::run_experiment(o);
    const double recall = r.summary.at("groups").at(0).at("rate");
    c.note(fmt("planted-pair recall %.2f (d=40, n=2000, 100 trials)", recall));
    c.expect(recall >= 0.9, "recall below 0.9");

    const auto same = hx::run_trials(20, [](std::size_t i) {
      const Basis b = random_lattice(25, 10100 + i);
      GaussSieveOptions lsf;
      lsf.scan = PairScan::lsf;
      const double fast = gauss_sieve(b, {}, subseed(i, 1), lsf).shortest.norm();
      const double slow = gauss_sieve(b, {}, subseed(i, 1)).shortest.norm();
      return std::abs(fast - slow) <= 1e-9 * slow;
    });
    const auto n = std::count(same.begin(), same.end(), true);
    c.note(fmt("lsf gauss sieve min norm equal on %.0f/20 at d=25", static_cast<double>(n)));
    c.expect(n >= 19, "lsf gauss sieve agreement below 19/20");
  });
  within_budget(c, ms, 900e3);
  return c.verdict();
}

std::string list_bytes(const PreprocessedList& list) {
  std::ostringstream out;
  save_preprocessed(out, list);
  return out.str();
}

Verdict determinism() {
  Checks c;
  const double ms = hx::timed_ms([&] {
    const Basis b = random_lattice(20, 11000);
    c.expect(random_lattice(20, 11000).fingerprint() == b.fingerprint(), "basis generation not reproducible");

    const auto g1 = gauss_sieve(b, {}, 11001), g2 = gauss_sieve(b, {}, 11001);
    bool same = g1.list.size() == g2.list.size() && g1.stats.samples == g2.stats.samples;
    for (std::size_t i = 0; same && i < g1.list.size(); ++i) same = g1.list[i] == g2.list[i];
    c.expect(same, "gauss sieve lists differ");
    c.expect(run_nv_sieve(b, {}, 11002).shortest == run_nv_sieve(b, {}, 11002).shortest, "nv sieve differs");

    Rng rng(11003);
    const TargetVector t = random_target(b, rng);
    const auto a1 = solve_cvp_adaptive(b, t, 11004), a2 = solve_cvp_adaptive(b, t, 11004);
    c.expect(a1.closest == a2.closest && a1.trace.size() == a2.trace.size(), "adaptive cvp differs");

    PreprocessOptions opt;
    opt.use_lsf = true;
    opt.num_filters = 2000;
    const auto params = CvppParams::for_mode(CvppMode::bdd(0.5));
    const PreprocessedList l1 = preprocess(b, params, 11005, opt), l2 = preprocess(b, params, 11005, opt);
    const std::string bytes = list_bytes(l1);
    c.expect(bytes == list_bytes(l2), "preprocessed list bytes differ");
    std::istringstream in(bytes);
    const PreprocessedList back = load_preprocessed(in, b);
    c.expect(list_bytes(back) == bytes, "reloaded list serializes differently");
    int equal = 0;
    for (int i = 0; i < 50; ++i) {
      const TargetVector q = random_target(b, rng);
      const CvppSolution x = solve(l1, b, q), y = solve(back, b, q);
      equal += x.vector == y.vector && x.distance == y.distance && x.certificate.beta == y.certificate.beta &&
               x.certificate.reduction_count == y.certificate.reduction_count;
    }
    c.expect(equal == 50, "reloaded list answers differ");

    hx::ExperimentOptions o;
    o.name = "kappa-sweep";
    o.dims = {16};
    o.trials = 4;
    o.params = {2.0};
    o.seed = 11006;
    const auto r1 = hx::run_experiment(o);
    o.workers = 1;
    const auto r2 = hx::run_experiment(o);
    c.expect(hx::same_outcomes(r1, r2) && r1.summary.at("groups") == r2.summary.at("groups"),
             "experiment records differ");
    c.expect(hx::same_outcomes(r1, hx::replay(hx::json(r1).get<hx::ExperimentRecord>())), "replay differs");
    c.note(fmt("list %.0f bytes, %.0f/50 reloaded queries identical", static_cast<double>(bytes.size()), equal));
  });
  within_budget(c, ms, 60e3);
  return c.verdict();
}

struct Criterion {
  const char* name;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {"exponent regression", exponent_regression},
    {"cross-module identity", cross_module_identity},
    {"svp correctness", svp_correctness},
    {"list-size scaling", list_size_scaling},
    {"adaptive cvp", adaptive_cvp},
    {"exact cvpp", exact_cvpp},
    {"bdd/approx sweeps", bdd_approx},
    {"collision phenomenon", collisions},
    {"reduction probability monte carlo", lemma2_mc},
    {"lsf recall and equivalence", lsf_recall},
    {"determinism and persistence", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion numbers (default: all)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int i = 1; i <= 11; ++i) selected.push_back(i);

  bool all = true;
  for (int n : selected) {
    const Criterion& k = kCriteria[n - 1];
    Verdict v;
    try {
      v = k.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s)\n", n, k.name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
