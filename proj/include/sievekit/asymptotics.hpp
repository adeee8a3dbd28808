#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

namespace sievekit {

/// Per-dimension base-2 exponents: log2(S)/d, log2(T1)/d, log2(T2)/d.
struct ComplexityPoint {
  double space_exp = 0.0;
  double preproc_exp = 0.0;
  double query_exp = 0.0;
  bool single_instance = false;  // adaptive CVP: no preprocessing/query split
};

/// (1/2) log2(3/2), the sieve cost floor on preprocessing.
double svp_time_exponent();
/// (1/2) log2(4/3), the sieve list size exponent.
double svp_space_exponent();

/// Exact CVPP with a list of radius sqrt(2) lambda_1 and filter parameter u:
/// S = T1 = (1/(u(sqrt2 - u)))^(d/2), T2 = ((sqrt2 + u)/(2u))^(d/2).
/// u in [sqrt2/2, sqrt2); throws DomainError otherwise.
ComplexityPoint cvpp_tradeoff(double u);

/// Same tradeoff for a list of radius alpha lambda_1:
/// S = (1/(1 - (a^2 - 1)(u^2 - (2u/a) sqrt(a^2 - 1) + 1)))^(d/2),
/// T2 = ((a + u sqrt(a^2 - 1)) / (2a - a^3 + a^2 u sqrt(a^2 - 1)))^(d/2),
/// T1 = max(S, (3/2)^(d/2)). u in [sqrt((a^2-1)/a^2), sqrt(a^2/(a^2-1))).
ComplexityPoint list_tradeoff(double alpha, double u);

/// list_tradeoff at the BDD radius for delta in (0, 1].
ComplexityPoint bdd_tradeoff(double delta, double u);
/// list_tradeoff at the approximate-CVP radius for kappa >= 1.
ComplexityPoint approx_tradeoff(double kappa, double u);

/// Smallest valid u (the space-minimal end of the tradeoff) for radius alpha.
double min_u(double alpha);
/// Exclusive upper end of the u range for radius alpha.
double max_u(double alpha);

/// Adaptive CVP: space (4/3)^(d/2), time (3/2)^(d/2).
ComplexityPoint adaptive_exponents();

/// The u on the exact CVPP tradeoff with query exponent epsilon (bisection),
/// and the point there. epsilon in (0, (1/2) log2(3/2)].
std::pair<double, ComplexityPoint> subexp_regime(double epsilon);

/// kappa at which the approximate-CVP radius satisfies alpha(kappa)^d = d,
/// i.e. a list of polynomial size. dimension >= 8.
double poly_advice_kappa(double dimension);

enum class TradeoffProblem { cvpp, bdd, approx };

const char* to_string(TradeoffProblem problem);

struct CurvePoint {
  ComplexityPoint point;
  double u = 0.0;
};

/// `samples` points uniform in u from the space-minimal u to the u where
/// space_exp reaches max_space_exp. `param` is delta or kappa (ignored for
/// cvpp).
std::vector<CurvePoint> tradeoff_curve(TradeoffProblem problem, double param, int samples,
                                       double max_space_exp = 1.0);

/// CSV with header space_exp,preproc_exp,query_exp,param (param = u),
/// six decimals.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace sievekit
