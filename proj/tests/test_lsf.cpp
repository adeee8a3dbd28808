#include "support.hpp"

#include "sievekit/lsf.hpp"
#include "sievekit/sampler.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <limits>
#include <numbers>
#include <set>

using namespace sievekit;
using std::numbers::pi;

namespace {

// Exact mass of the cap {f : <f, x> >= alpha} on S^{d-1}, alpha >= 0.
double exact_cap_mass(int d, double alpha) {
  return 0.5 * boost::math::ibeta((d - 1) / 2.0, 0.5, 1.0 - alpha * alpha);
}

// Filter exponents rebuilt from asymptotic cap and wedge volumes: with
// t = 1/W(theta) filters, space is n t C(alpha_u) and a query costs
// t C(alpha_q) filter hits plus n t W(pi/2) candidates.
std::pair<double, double> cap_geometry_exponents(double theta, double u) {
  const double au = std::cos(theta), aq = u * au;
  const double n = std::log2(1.0 / std::sin(theta));
  auto cap = [](double a) { return 0.5 * std::log2(1.0 - a * a); };
  auto wedge = [&](double phi) {
    const double x = 1.0 - (aq * aq + au * au - 2 * aq * au * std::cos(phi)) / std::pow(std::sin(phi), 2);
    return x > 0 ? 0.5 * std::log2(x) : -std::numeric_limits<double>::infinity();
  };
  const double t = -wedge(theta);
  return {std::max(t + cap(aq), n + t + wedge(pi / 2)), t + cap(au)};
}

RealMatrix random_rows(int n, int d, Rng& rng) {
  RealMatrix m(n, d);
  for (int i = 0; i < n; ++i) m.row(i) = random_unit_vector(d, rng).transpose() * (1.0 + i % 3);
  return m;
}

}  // namespace

TEST_SUITE("lsf") {

TEST_CASE("parameter validation") {
  const LsfParams p = LsfParams::make(pi / 3, 1.2, 10);
  CHECK(p.alpha_u == std::cos(pi / 3));
  CHECK(p.alpha_q == 1.2 * p.alpha_u);
  CHECK_THROWS_AS(LsfParams::make(0.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(LsfParams::make(pi / 2, 1.0, 1), DomainError);
  CHECK_THROWS_AS(LsfParams::make(pi / 3, 0.4, 1), DomainError);
  CHECK_THROWS_AS(LsfParams::make(pi / 3, 2.1, 1), DomainError);
  CHECK_THROWS_AS(LsfParams::make(pi / 3, 1.0, 0), DomainError);
}

TEST_CASE("printed exponents") {
  const auto a = compute_exponents(pi / 3, 1.0);
  CHECK(a.space_exp() == doctest::Approx(0.292).epsilon(2e-3));
  CHECK(a.query_exp() == doctest::Approx(0.084).epsilon(1e-2));
  const auto b = compute_exponents(pi / 4, 1.0);
  CHECK(b.space_exp() == doctest::Approx(0.6358).epsilon(1e-4));
  CHECK(b.query_exp() == doctest::Approx(0.1358).epsilon(1e-3));
  const auto c = compute_exponents(pi / 4, std::sqrt(0.5));
  CHECK(c.space_exp() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(c.query_exp() == doctest::Approx(0.2925).epsilon(1e-3));
}

TEST_CASE("exponents agree with cap geometry") {
  for (double theta : {0.3, pi / 4, pi / 3, std::asin(1 / 1.2), 1.3}) {
    const double lo = std::cos(theta), hi = 1 / std::cos(theta);
    for (int k = 0; k < 50; ++k) {
      const double u = lo + (hi - lo) * k / 50.0;
      const auto e = compute_exponents(theta, u);
      const auto [rq, ru] = cap_geometry_exponents(theta, u);
      CHECK(e.rho_q == doctest::Approx(rq).epsilon(1e-9));
      CHECK(e.rho_u == doctest::Approx(ru).epsilon(1e-9));
      CHECK(std::isfinite(e.rho_q));
      CHECK(e.rho_q >= -1e-12);
      CHECK(e.rho_u >= -1e-12);
    }
  }
}

TEST_CASE("exponents are monotone in u and space-optimal at u = cos theta") {
  for (double theta : {pi / 4, pi / 3}) {
    CHECK(std::abs(compute_exponents(theta, std::cos(theta)).rho_u) <= 1e-9);
    const double lo = std::cos(theta), hi = 1 / std::cos(theta);
    NnsExponents prev = compute_exponents(theta, lo);
    for (int k = 1; k < 100; ++k) {
      const auto e = compute_exponents(theta, lo + (hi - lo) * k / 100.0);
      CHECK(e.rho_q <= prev.rho_q + 1e-12);
      CHECK(e.rho_u >= prev.rho_u - 1e-12);
      prev = e;
    }
  }
  CHECK(compute_exponents(pi / 4, 1.0).n_exponent == doctest::Approx(0.5));
  CHECK_THROWS_AS(compute_exponents(pi / 3, 3.0), DomainError);
}

TEST_CASE("monte carlo masses match exact caps") {
  for (int d : {10, 20, 40}) {
    for (double alpha : {0.2, 0.5}) {
      const double exact = exact_cap_mass(d, alpha);
      const double mc = cap_mass(d, alpha, 3, 400000);
      CHECK(std::abs(mc - exact) <= 5 * std::sqrt(exact * (1 - exact) / 400000) + 1e-6);
    }
  }
  // Wedge mass against full-dimensional sampling.
  Rng rng(8);
  const int d = 10, n = 200000;
  const double angle = 0.9, au = 0.5, aq = 0.45;
  RealVector x = RealVector::Zero(d), y = RealVector::Zero(d);
  x(0) = 1;
  y(0) = std::cos(angle);
  y(1) = std::sin(angle);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const RealVector f = random_unit_vector(d, rng);
    if (f.dot(x) >= au && f.dot(y) >= aq) ++hits;
  }
  const double direct = static_cast<double>(hits) / n;
  const double projected = wedge_mass(d, angle, au, aq, 5, n);
  CHECK(std::abs(direct - projected) <= 5 * std::sqrt(2 * direct / n));
}

TEST_CASE("filters are seeded unit vectors") {
  const LsfParams p = LsfParams::make(pi / 3, 1.0, 300);
  const LsfIndex a(12, p, 77), b(12, p, 77), c(12, p, 78);
  CHECK(a.filters() == b.filters());
  CHECK(a.filters() != c.filters());
  for (int f = 0; f < 300; ++f) CHECK(a.filters().row(f).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.size() == 0);
  CHECK(a.query_candidates(RealVector::Ones(12)).empty());
  CHECK_THROWS_AS(LsfIndex(1000, LsfParams::make(pi / 3, 1.0, LsfIndex::kMaxFilterEntries), 1), ResourceCapError);
}

TEST_CASE("bucket membership is the update cap condition") {
  const int d = 10;
  const LsfParams p = LsfParams::make(pi / 3, 0.9, 400);
  LsfIndex index(d, p, 5);
  Rng rng(6);
  const RealMatrix rows = random_rows(200, d, rng);
  for (int i = 0; i < 200; ++i) index.insert(static_cast<LsfIndex::Id>(i), rows.row(i).transpose());
  for (int i = 0; i < 200; ++i) {
    const RealVector unit = rows.row(i).normalized().transpose();
    std::set<std::uint32_t> expected;
    for (int f = 0; f < 400; ++f)
      if (index.filters().row(f).dot(unit) >= p.alpha_u) expected.insert(static_cast<std::uint32_t>(f));
    const auto& got = index.buckets_of(static_cast<LsfIndex::Id>(i));
    CHECK(std::set<std::uint32_t>(got.begin(), got.end()) == expected);
  }
  CHECK_THROWS_AS(index.insert(0, rows.row(0).transpose()), std::invalid_argument);
  CHECK_THROWS_AS(index.insert(999, RealVector::Zero(d)), std::invalid_argument);
}

TEST_CASE("queries return the union of the hit buckets") {
  const int d = 10;
  const LsfParams p = LsfParams::make(pi / 3, 1.1, 300);
  LsfIndex index(d, p, 9);
  Rng rng(10);
  const RealMatrix rows = random_rows(300, d, rng);
  std::vector<LsfIndex::Id> ids(300);
  for (int i = 0; i < 300; ++i) ids[i] = 1000 + i;
  index.insert_batch(ids, rows);
  for (int trial = 0; trial < 30; ++trial) {
    const RealVector t = random_unit_vector(d, rng) * 3.0;
    std::set<LsfIndex::Id> expected;
    for (int f = 0; f < 300; ++f)
      if (index.filters().row(f).dot(t.normalized()) >= p.alpha_q)
        for (auto id : index.bucket(f)) expected.insert(id);
    const auto got = index.query_candidates(t);
    CHECK(got.size() == expected.size());
    CHECK(std::set<LsfIndex::Id>(got.begin(), got.end()) == expected);

    const auto sym = index.query_candidates_symmetric(t);
    std::set<LsfIndex::Id> both = expected;
    for (auto id : index.query_candidates(-t)) both.insert(id);
    CHECK(std::set<LsfIndex::Id>(sym.begin(), sym.end()) == both);
  }
}

TEST_CASE("batch insert equals single inserts, remove restores") {
  const int d = 8;
  const LsfParams p = LsfParams::make(pi / 4, 1.0, 200);
  Rng rng(11);
  const RealMatrix rows = random_rows(50, d, rng);
  LsfIndex a(d, p, 3), b(d, p, 3);
  std::vector<LsfIndex::Id> ids(50);
  for (int i = 0; i < 50; ++i) {
    ids[i] = i;
    a.insert(i, rows.row(i).transpose());
  }
  b.insert_batch(ids, rows);
  CHECK(a == b);

  const LsfIndex before = a;
  a.insert(77, random_unit_vector(d, rng));
  CHECK_FALSE(a == before);
  a.remove(77);
  CHECK(a == before);
  CHECK_THROWS_AS(a.remove(77), NotFoundError);
  for (int i = 0; i < 50; ++i) a.remove(i);
  for (int f = 0; f < 200; ++f) CHECK(a.bucket(f).empty());
}

TEST_CASE("brute force index returns every stored id") {
  LsfIndex index = LsfIndex::brute_force(6);
  Rng rng(12);
  for (int i = 0; i < 20; ++i) index.insert(i, random_unit_vector(6, rng));
  auto got = index.query_candidates(random_unit_vector(6, rng));
  std::sort(got.begin(), got.end());
  CHECK(got.size() == 20);
  CHECK(got.front() == 0);
  CHECK(got.back() == 19);
}

TEST_CASE("mean bucket load matches the cap mass at d=50") {
  const int d = 50;
  const std::size_t filters = 20000;
  const LsfParams p = LsfParams::make(pi / 3, 1.0, filters);
  LsfIndex index(d, p, 13);
  Rng rng(14);
  const RealMatrix rows = random_rows(1000, d, rng);
  std::vector<LsfIndex::Id> ids(1000);
  for (int i = 0; i < 1000; ++i) ids[i] = i;
  index.insert_batch(ids, rows);
  double load = 0;
  for (int i = 0; i < 1000; ++i) load += static_cast<double>(index.buckets_of(i).size());
  load /= 1000;
  const double expected = filters * cap_mass(d, p.alpha_u, 15, 2'000'000);
  CHECK(load >= expected / 2);
  CHECK(load <= expected * 2);
  CHECK(load == doctest::Approx(filters * exact_cap_mass(d, p.alpha_u)).epsilon(0.1));
}

TEST_CASE("default filter count gives self and planted-pair recall") {
  const int d = 24, n = 500;
  const double theta = pi / 3;
  const std::size_t filters = default_num_filters(d, theta, 1.0);
  CHECK(filters == default_num_filters(d, theta, 1.0));
  int self = 0, planted = 0;
  const int trials = 60;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(subseed(99, trial));
    LsfIndex index(d, LsfParams::make(theta, 1.0, filters), subseed(100, trial));
    const RealVector x = random_unit_vector(d, rng);
    RealVector z = random_unit_vector(d, rng);
    z = (z - z.dot(x) * x).normalized();
    const RealVector y = std::cos(theta - 0.05) * x + std::sin(theta - 0.05) * z;
    index.insert(0, x);
    for (int i = 1; i < n; ++i) index.insert(i, random_unit_vector(d, rng));
    const auto a = index.query_candidates(x);
    const auto b = index.query_candidates(y);
    self += std::find(a.begin(), a.end(), 0) != a.end();
    planted += std::find(b.begin(), b.end(), 0) != b.end();
  }
  CHECK(self >= 0.9 * trials);
  CHECK(planted >= 0.85 * trials);
}

}  // TEST_SUITE
