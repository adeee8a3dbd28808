#include "sievekit/asymptotics.hpp"

#include "sievekit/core.hpp"
#include "sievekit/cvpp.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace sievekit {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kEndpointTol = 1e-12;

template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
  // f(lo) and f(hi) have opposite signs.
  const bool rising = f(hi) > f(lo);
  for (int i = 0; i < 400 && hi - lo > tol * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == rising)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double svp_time_exponent() { return 0.5 * std::log2(1.5); }
double svp_space_exponent() { return 0.5 * std::log2(4.0 / 3.0); }

ComplexityPoint cvpp_tradeoff(double u) {
  if (!(u >= (kSqrt2 / 2) * (1.0 - kEndpointTol) && u < kSqrt2))
    throw DomainError("u must lie in [sqrt(2)/2, sqrt(2)), got " + std::to_string(u));
  ComplexityPoint p;
  p.space_exp = 0.5 * std::log2(1.0 / (u * (kSqrt2 - u)));
  p.preproc_exp = p.space_exp;
  p.query_exp = 0.5 * std::log2((kSqrt2 + u) / (2.0 * u));
  return p;
}

double min_u(double alpha) {
  if (!(alpha > 1.0)) throw DomainError("list radius alpha must exceed 1");
  return std::sqrt((alpha * alpha - 1.0) / (alpha * alpha));
}

double max_u(double alpha) {
  if (!(alpha > 1.0)) throw DomainError("list radius alpha must exceed 1");
  return std::sqrt(alpha * alpha / (alpha * alpha - 1.0));
}

ComplexityPoint list_tradeoff(double alpha, double u) {
  const double lo = min_u(alpha), hi = max_u(alpha);
  if (!(u >= lo * (1.0 - kEndpointTol) && u < hi))
    throw DomainError("u must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "), got " +
                      std::to_string(u));
  const double a2 = alpha * alpha;
  const double r = std::sqrt(a2 - 1.0);
  const double s_den = 1.0 - (a2 - 1.0) * (u * u - (2.0 * u / alpha) * r + 1.0);
  const double q_den = 2.0 * alpha - alpha * a2 + a2 * u * r;
  if (!(s_den > 0.0) || !(q_den > 0.0)) throw DomainError("tradeoff undefined at u = " + std::to_string(u));
  ComplexityPoint p;
  p.space_exp = 0.5 * std::log2(1.0 / s_den);
  p.preproc_exp = std::max(p.space_exp, svp_time_exponent());
  p.query_exp = 0.5 * std::log2((alpha + u * r) / q_den);
  return p;
}

ComplexityPoint bdd_tradeoff(double delta, double u) {
  return list_tradeoff(min_alpha(CvppMode::bdd(delta)), u);
}

ComplexityPoint approx_tradeoff(double kappa, double u) {
  return list_tradeoff(min_alpha(CvppMode::approx(kappa)), u);
}

ComplexityPoint adaptive_exponents() {
  ComplexityPoint p;
  p.space_exp = svp_space_exponent();
  p.preproc_exp = svp_time_exponent();
  p.query_exp = svp_time_exponent();
  p.single_instance = true;
  return p;
}

std::pair<double, ComplexityPoint> subexp_regime(double epsilon) {
  const double top = cvpp_tradeoff(kSqrt2 / 2).query_exp;
  if (!(epsilon > 0.0 && epsilon <= top * (1.0 + kEndpointTol)))
    throw DomainError("epsilon must lie in (0, " + std::to_string(top) + "]");
  // query_exp decreases from `top` at sqrt2/2 to 0 at sqrt2.
  const double u = bisect([&](double x) { return cvpp_tradeoff(x).query_exp - epsilon; }, kSqrt2 / 2,
                          std::nextafter(kSqrt2, 0.0), 1e-15);
  return {u, cvpp_tradeoff(u)};
}

double poly_advice_kappa(double dimension) {
  if (!(dimension >= 8.0)) throw DomainError("poly_advice_kappa needs dimension >= 8");
  const double target = std::log(dimension) / dimension;  // log alpha
  auto f = [&](double kappa) { return std::log(min_alpha(CvppMode::approx(kappa))) - target; };
  double hi = 2.0;
  while (f(hi) > 0.0) hi *= 2.0;
  return bisect(f, 1.0, hi, 1e-14);
}

const char* to_string(TradeoffProblem problem) {
  switch (problem) {
    case TradeoffProblem::cvpp:
      return "cvpp";
    case TradeoffProblem::bdd:
      return "bdd";
    case TradeoffProblem::approx:
      return "approx";
  }
  return "?";
}

std::vector<CurvePoint> tradeoff_curve(TradeoffProblem problem, double param, int samples, double max_space_exp) {
  if (samples < 2) throw DomainError("a curve needs at least 2 samples");
  double alpha = kSqrt2;
  if (problem == TradeoffProblem::bdd) alpha = min_alpha(CvppMode::bdd(param));
  if (problem == TradeoffProblem::approx) alpha = min_alpha(CvppMode::approx(param));
  auto at = [&](double u) { return problem == TradeoffProblem::cvpp ? cvpp_tradeoff(u) : list_tradeoff(alpha, u); };

  const double lo = problem == TradeoffProblem::cvpp ? kSqrt2 / 2 : min_u(alpha);
  const double cap = problem == TradeoffProblem::cvpp ? kSqrt2 : max_u(alpha);
  if (!(max_space_exp > at(lo).space_exp)) throw DomainError("max_space_exp is below the space-minimal point");
  // space_exp grows without bound towards the open end of the u range.
  const double hi = bisect([&](double u) { return at(u).space_exp - max_space_exp; }, lo,
                           cap * (1.0 - 1e-9), 1e-15);

  std::vector<CurvePoint> curve;
  for (int i = 0; i < samples; ++i) {
    const double u = lo + (hi - lo) * i / (samples - 1);
    curve.push_back({at(u), u});
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "space_exp,preproc_exp,query_exp,param\n" << std::fixed << std::setprecision(6);
  for (const auto& c : curve)
    out << c.point.space_exp << ',' << c.point.preproc_exp << ',' << c.point.query_exp << ',' << c.u << '\n';
}

}  // namespace sievekit
