#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "orthopos/positivity.hpp"
#include "test_support.hpp"

using namespace orthopos;

TEST_CASE("bisect") {
  SUBCASE("step function lands within epsilon") {
    const BisectionConfig<double> config{};
    int iterations = 0;
    const double root =
        bisect(config, [](double a) { return a >= 0.3; }, &iterations);
    CHECK(std::abs(root - 0.3) <= 1e-6);
    CHECK(iterations == 20);  // ceil(log2(1/epsilon))
  }

  SUBCASE("iteration count follows the bracket width") {
    BisectionConfig<double> config;
    config.epsilon = 1e-3;
    int iterations = 0;
    bisect(config, [](double a) { return a >= 0.5; }, &iterations);
    CHECK(iterations == 10);
  }

  SUBCASE("invalid brackets are rejected up front") {
    const BisectionConfig<double> config{};
    CHECK_THROWS_AS(bisect(config, [](double) { return true; }), InvalidBracket);
    CHECK_THROWS_AS(bisect(config, [](double) { return false; }), InvalidBracket);
    int calls = 0;
    CHECK_THROWS_AS(bisect(config,
                           [&](double) {
                             ++calls;
                             return false;
                           }),
                    InvalidBracket);
    CHECK(calls == 1);  // endpoint check happens once, up front
  }

  SUBCASE("rational bisection is exact dyadic") {
    BisectionConfig<Rational> config;
    config.epsilon = Rational(1, 1024);
    const Rational root =
        bisect(config, [](const Rational& a) { return a >= Rational(1, 3); });
    CHECK(abs(root - Rational(1, 3)) <= Rational(1, 1024));
    CHECK(denominator(root) <= 2048);
  }

  SUBCASE("predicate flips across the returned threshold") {
    set_thread_precision(50);
    const Real beta(2), gamma(3);
    const BasisSpec basis(2);
    const PositivityOptions<Real> opts{};
    const auto positive = [&](const Real& alpha) {
      return amplitude_positive<Real>(10, alpha, beta, gamma, basis, opts);
    };
    const BisectionConfig<Real> config{};
    const Real alpha_star = bisect(config, positive);
    CHECK(alpha_star > 0);
    CHECK(alpha_star < 1);
    CHECK(positive(alpha_star + 2 * config.epsilon));
    CHECK_FALSE(positive(alpha_star - 2 * config.epsilon));
  }
}

TEST_CASE("critical_alpha") {
  set_thread_precision(50);
  const BasisSpec legendre(2);

  SUBCASE("M=0 row is all-positive: returns alpha_min with the flag") {
    const auto result =
        critical_alpha<Real>(0, Real(2), Real(3), legendre);
    CHECK(result.status == CellStatus::AllPositive);
    CHECK(result.alpha_crit == 0);
  }

  SUBCASE("M=10 threshold is interior and bit-reproducible") {
    const auto first = critical_alpha<Real>(10, Real(2), Real(3), legendre);
    const auto second = critical_alpha<Real>(10, Real(2), Real(3), legendre);
    CHECK(first.status == CellStatus::Ok);
    CHECK(first.alpha_crit > 0);
    CHECK(first.alpha_crit < 1);
    CHECK(first.alpha_crit == second.alpha_crit);
  }

  SUBCASE("threshold grows with sphere dimension") {
    const auto d2 = critical_alpha<Real>(10, Real(2), Real(3), BasisSpec(2));
    const auto d3 = critical_alpha<Real>(10, Real(2), Real(3), BasisSpec(3));
    const BisectionConfig<Real> config{};
    CHECK(d3.alpha_crit >= d2.alpha_crit - 2 * config.epsilon);
  }
}

TEST_CASE("positivity_scan surfaces the predicate's shape in alpha") {
  set_thread_precision(50);
  const BasisSpec legendre(2);

  SUBCASE("interior threshold: one false->true transition") {
    const auto scan =
        positivity_scan<Real>(10, Real(2), Real(3), legendre, 21);
    CHECK(scan.transitions == 1);
    CHECK(scan.monotone);
    CHECK_FALSE(scan.positive.front());
    CHECK(scan.positive.back());
  }
  SUBCASE("all-positive row scans constant true") {
    const auto scan = positivity_scan<Real>(0, Real(2), Real(3), legendre, 11);
    CHECK(scan.transitions == 0);
    CHECK(scan.monotone);
    CHECK(scan.positive.front());
  }
  SUBCASE("grid must have at least two points") {
    CHECK_THROWS_AS(positivity_scan<Real>(1, Real(2), Real(3), legendre, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("landscape") {
  set_thread_precision(50);
  const BasisSpec legendre(2);
  const GammaRule<Real> gamma_rule{};

  SUBCASE("gamma rule default is beta + 1") {
    CHECK(gamma_rule(Real(2)) == Real(3));
    const GammaRule<Real> fixed{Real(7)};
    CHECK(fixed(Real(2)) == Real(7));
  }

  SUBCASE("M=0 row sweeps to zero") {
    const auto result = landscape<Real>({0}, {Real(1), Real(2), Real(3)},
                                        gamma_rule, legendre);
    REQUIRE(result.grid.size() == 3);
    for (const auto& cell : result.grid) {
      CHECK(cell.status == CellStatus::AllPositive);
      CHECK(cell.alpha_crit == 0);
    }
    REQUIRE(result.profile.size() == 3);
    for (const auto& entry : result.profile) CHECK(entry.alpha_crit == 0);
  }

  SUBCASE("3x3 grid: deterministic, profile dominates every cell") {
    const std::vector<std::int64_t> Ms{2, 6, 10};
    const std::vector<Real> betas{Real(1), Real(2), Real(3)};
    const auto first = landscape<Real>(Ms, betas, gamma_rule, legendre);
    const auto second = landscape<Real>(Ms, betas, gamma_rule, legendre);
    REQUIRE(first.grid.size() == 9);
    REQUIRE(first.profile.size() == 3);
    for (std::size_t i = 0; i < first.grid.size(); ++i) {
      CHECK(first.grid[i].alpha_crit == second.grid[i].alpha_crit);
      CHECK(first.grid[i].status == second.grid[i].status);
    }
    for (std::size_t b = 0; b < betas.size(); ++b)
      for (std::size_t m = 0; m < Ms.size(); ++m)
        CHECK(first.profile[b].alpha_crit >=
              first.grid[m * betas.size() + b].alpha_crit);
  }

  SUBCASE("empty ranges are rejected") {
    CHECK_THROWS_AS(
        landscape<Real>({}, {Real(1)}, gamma_rule, legendre),
        std::invalid_argument);
    CHECK_THROWS_AS(landscape<Real>({1}, {}, gamma_rule, legendre),
                    std::invalid_argument);
  }
}
