#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orthopos/basis.hpp"
#include "test_support.hpp"

using namespace orthopos;
using testsupport::gegenbauer_monomial;
using testsupport::horner;
using testsupport::legendre_monomial;
using testsupport::random_rational;

namespace {

CoefficientVector<Rational> rational_unit(int d, std::size_t n) {
  return CoefficientVector<Rational>::unit(BasisSpec(d), n);
}

}  // namespace

TEST_CASE("scalar mode invariants") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(numerator(Rational(2, 4)) == 1);
  CHECK(denominator(Rational(2, 4)) == 2);
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));

  CHECK_THROWS_AS(ScalarMode::float_digits(8).validate(), std::invalid_argument);
  CHECK_NOTHROW(ScalarMode::float_digits(16).validate());
  CHECK_NOTHROW(ScalarMode::exact_rational().validate());

  CHECK(parse_rational("0.4") == Rational(2, 5));
  CHECK(parse_rational("-1.25e-2") == Rational(-1, 80));
  CHECK(parse_rational("3/7") == Rational(3, 7));
  CHECK(parse_rational("10") == Rational(10));
  CHECK_THROWS_AS(parse_rational("zz"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);

  const Real x = Real("0.125");
  CHECK(to_rational_exact(x) == Rational(1, 8));
}

TEST_CASE("basis spec and lambda") {
  CHECK(BasisSpec(2).lambda<Rational>() == Rational(1, 2));
  CHECK(BasisSpec(3).lambda<Rational>() == Rational(1));
  CHECK(BasisSpec(4).lambda<Rational>() == Rational(3, 2));
  CHECK_THROWS_AS(BasisSpec(1), std::invalid_argument);
}

TEST_CASE("jacobi operator entries match the d=2 multiplication matrix") {
  const JacobiOperator<Rational> op{BasisSpec(2)};
  CHECK(op.super(0) == Rational(1));
  CHECK(op.sub(1) == Rational(1, 3));
  CHECK(op.super(1) == Rational(2, 3));
  CHECK(op.sub(2) == Rational(2, 5));
  CHECK(op.super(2) == Rational(3, 5));
  CHECK(op.sub(3) == Rational(3, 7));
  CHECK(op.sub(4) == Rational(4, 9));
}

TEST_CASE("apply_x on unit vectors") {
  SUBCASE("d=2: x P_0 = P_1") {
    const auto out = apply_x(rational_unit(2, 0));
    REQUIRE(out.size() == 2);
    CHECK(out.coeffs[0] == 0);
    CHECK(out.coeffs[1] == 1);
  }
  SUBCASE("d=2: x P_1 = (1/3) P_0 + (2/3) P_2") {
    const auto out = apply_x(rational_unit(2, 1));
    REQUIRE(out.size() == 3);
    CHECK(out.coeffs[0] == Rational(1, 3));
    CHECK(out.coeffs[1] == 0);
    CHECK(out.coeffs[2] == Rational(2, 3));
  }
  SUBCASE("d=3: x C_1 = (1/2) C_0 + (1/2) C_2") {
    const auto out = apply_x(rational_unit(3, 1));
    REQUIRE(out.size() == 3);
    CHECK(out.coeffs[0] == Rational(1, 2));
    CHECK(out.coeffs[1] == 0);
    CHECK(out.coeffs[2] == Rational(1, 2));
  }
  SUBCASE("output truncation grows by one") {
    const auto v = rational_unit(2, 3);
    CHECK(apply_x(v).size() == v.size() + 1);
  }
}

TEST_CASE("apply_linear_factor") {
  const BasisSpec legendre(2);
  Philox4x32 rng(2024, 1);

  SUBCASE("paper worked example: (x-x1)(x-x2) from e_0") {
    const Rational x1(1, 3), x2(-2, 7);
    auto v = rational_unit(2, 0);
    v = apply_linear_factor(v, Rational(1), -x1);
    REQUIRE(v.size() == 2);
    CHECK(v.coeffs[0] == -x1);
    CHECK(v.coeffs[1] == 1);

    v = apply_linear_factor(v, Rational(1), -x2);
    REQUIRE(v.size() == 3);
    CHECK(v.coeffs[0] == x1 * x2 + Rational(1, 3));
    CHECK(v.coeffs[1] == -(x1 + x2));
    CHECK(v.coeffs[2] == Rational(2, 3));
  }

  SUBCASE("a=0 gives the scalar multiple") {
    auto v = rational_unit(2, 1);
    v.coeffs[0] = Rational(3, 4);
    const auto out = apply_linear_factor(v, Rational(0), Rational(5));
    for (std::size_t n = 0; n < v.size(); ++n)
      CHECK(out.coeffs[n] == 5 * v.coeffs[n]);
    CHECK(out.coeffs.back() == 0);
  }

  SUBCASE("linearity: (a x + b) f = a (x f) + b f, exactly") {
    for (int trial = 0; trial < 20; ++trial) {
      const int d = 2 + static_cast<int>(rng.next_u32() % 3);
      CoefficientVector<Rational> v(BasisSpec(d),
                                    {random_rational(rng), random_rational(rng),
                                     random_rational(rng), random_rational(rng)});
      const Rational a = random_rational(rng);
      const Rational b = random_rational(rng);
      const auto combined = apply_linear_factor(v, a, b);
      const auto xf = apply_x(v);
      for (std::size_t n = 0; n < combined.size(); ++n) {
        const Rational expected =
            a * xf.coeffs[n] + (n < v.size() ? b * v.coeffs[n] : Rational(0));
        CHECK(combined.coeffs[n] == expected);
      }
    }
  }

  SUBCASE("degree grows by exactly one") {
    for (int d : {2, 3, 5}) {
      CoefficientVector<Rational> v(BasisSpec(d),
                                    {Rational(1), Rational(-2), Rational(5)});
      CHECK(apply_x(v).degree() == v.degree() + 1);
    }
  }
}

TEST_CASE("eval_basis_series") {
  SUBCASE("named values") {
    const std::vector<Real> c1{Real(0), Real(1)};
    CHECK(eval_basis_series(CoefficientVector<Real>(BasisSpec(3), c1),
                            Real(1) / 2) == Real(1));  // C_1^1(1/2) = 1

    const std::vector<Rational> c2{Rational(0), Rational(0), Rational(1)};
    CHECK(eval_basis_series(CoefficientVector<Rational>(BasisSpec(3), c2),
                            Rational(1)) == Rational(3));  // U_2(1) = 3

    const std::vector<Rational> c3{Rational(1), Rational(0), Rational(1)};
    CHECK(eval_basis_series(CoefficientVector<Rational>(BasisSpec(2), c3),
                            Rational(0)) == Rational(1, 2));  // 1 + P_2(0)
  }

  SUBCASE("domain error beyond 1 + slack") {
    const CoefficientVector<double> v(BasisSpec(2), {1.0, 1.0});
    CHECK_THROWS_AS(eval_basis_series(v, 1.5), std::domain_error);
    CHECK_NOTHROW(eval_basis_series(v, 1.0));
    CHECK_NOTHROW(eval_basis_series(v, -1.0));
  }

  SUBCASE("recurrence agrees with the monomial closed forms, exactly") {
    Philox4x32 rng(7, 0);
    for (long n = 0; n <= 30; ++n) {
      const Rational z = random_rational(rng);
      for (int d : {2, 3, 4, 7}) {
        const auto e_n = rational_unit(d, static_cast<std::size_t>(n));
        const Rational via_series = eval_basis_series(e_n, z);
        const Rational via_monomial = horner(gegenbauer_monomial(n, d), z);
        CHECK(via_series == via_monomial);
      }
      // Legendre reduction: the d=2 path reproduces P_n itself.
      const auto e_n = rational_unit(2, static_cast<std::size_t>(n));
      CHECK(eval_basis_series(e_n, z) == horner(legendre_monomial(n), z));
    }
  }

  SUBCASE("legendre reduction holds for the operator path too") {
    Philox4x32 rng(8, 0);
    CoefficientVector<Rational> v(BasisSpec(2),
                                  {random_rational(rng), random_rational(rng),
                                   random_rational(rng)});
    const auto out = apply_x(v);
    // dedicated Legendre recurrence, written out with its own fractions
    std::vector<Rational> expected(v.size() + 1, Rational(0));
    for (long n = 0; n < static_cast<long>(v.size()); ++n) {
      expected[n + 1] += v.coeffs[n] * Rational(n + 1) / Rational(2 * n + 1);
      if (n > 0)
        expected[n - 1] += v.coeffs[n] * Rational(n) / Rational(2 * n + 1);
    }
    for (std::size_t n = 0; n < expected.size(); ++n)
      CHECK(out.coeffs[n] == expected[n]);
  }
}

TEST_CASE("gegenbauer large-d limit diagnostic") {
  SUBCASE("n=0 is exactly one") {
    CHECK(gegenbauer_limit_check<double>(0, 0.3, 17) == 1.0);
  }
  SUBCASE("n=1, z=0.5, d=1000") {
    CHECK(gegenbauer_limit_check<double>(1, 0.5, 1000) ==
          doctest::Approx(0.4995).epsilon(1e-12));
  }
  SUBCASE("n=2, z=1, d=10^4 near 1/2") {
    CHECK(std::abs(gegenbauer_limit_check<double>(2, 1.0, 10000) - 0.5) < 1e-3);
  }
  SUBCASE("error decreases monotonically in d") {
    for (long n = 1; n <= 4; ++n) {
      for (double z : {0.25, 0.5, 1.0}) {
        const double limit =
            std::pow(z, static_cast<double>(n)) /
            orthopos::to_double(orthopos::factorial<double>(n));
        double previous = std::numeric_limits<double>::infinity();
        for (int d : {10, 100, 1000, 10000}) {
          const double err =
              std::abs(gegenbauer_limit_check<double>(n, z, d) - limit);
          CHECK(err < previous);
          previous = err;
        }
      }
    }
  }
}
