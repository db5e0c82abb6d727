#include <cmath>
#include <vector>

#include "doctest.h"
#include "sponge/numeric.hpp"
#include "sponge/rational.hpp"
#include "sponge/error.hpp"

using namespace sponge;

TEST_CASE("log_sum_exp handles large and empty inputs") {
  std::vector<double> xs{1000.0, 1000.0};
  CHECK(numeric::log_sum_exp(xs) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(numeric::log_sum_exp(std::vector<double>{}) == numeric::kNegInf);
  numeric::LogSum a, b;
  a.add(std::log(0.25));
  b.add(std::log(0.75));
  a.merge(b);
  CHECK(std::fabs(a.value()) < 1e-15);
}

TEST_CASE("solve_decreasing finds roots including zero") {
  auto r = numeric::solve_decreasing([](double x) { return 1 - x; }, [](double) { return -1.0; });
  CHECK(std::fabs(r.x) < 1e-14 + 1.0);
  CHECK(r.x == doctest::Approx(1.0).epsilon(1e-14));
  auto z = numeric::solve_decreasing([](double x) { return std::pow(0.5, x) + std::pow(0.5, x) - 2; },
                                     [](double x) { return -2 * std::log(2.0) * std::pow(0.5, x); });
  CHECK(std::fabs(z.x) < 1e-13);
  auto big = numeric::solve_decreasing([](double x) { return 300.0 - x; }, [](double) { return -1.0; });
  CHECK(big.x == doctest::Approx(300.0).epsilon(1e-14));
}

TEST_CASE("bfgs minimizes a quadratic") {
  numeric::Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = 2 * (x[0] - 3);
    g[1] = 20 * (x[1] + 1);
    return (x[0] - 3) * (x[0] - 3) + 10 * (x[1] + 1) * (x[1] + 1);
  };
  auto r = numeric::minimize_bfgs(f, {0.0, 0.0});
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(r.x[1] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("augmented Lagrangian respects an inequality") {
  // max -(x-2)^2 s.t. 1 - x >= 0
  numeric::Objective f = [](std::span<const double> x, std::span<double> g) {
    g[0] = -2 * (x[0] - 2);
    return -(x[0] - 2) * (x[0] - 2);
  };
  numeric::Constraint c{[](std::span<const double> x, std::span<double> g) {
    g[0] = -1;
    return 1 - x[0];
  }};
  auto r = numeric::maximize_constrained(f, {c}, {0.0});
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.violation < 1e-9);
}

TEST_CASE("softmax_pinned is a distribution with the right gradient") {
  std::vector<double> z{0.3, -1.2}, p(3), dz(2);
  numeric::softmax_pinned(z, p);
  CHECK(p[0] + p[1] + p[2] == doctest::Approx(1.0));
  // F = p[2]; finite difference on z[1]
  std::vector<double> dp{0, 0, 1};
  numeric::softmax_pinned_grad(p, dp, dz);
  std::vector<double> z2{0.3, -1.2 + 1e-6}, p2(3);
  numeric::softmax_pinned(z2, p2);
  CHECK(dz[1] == doctest::Approx((p2[2] - p[2]) / 1e-6).epsilon(1e-5));
}

TEST_CASE("rationals parse exactly") {
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-3") == Rational(-3));
  CHECK(rational_from_shortest(0.1) == Rational(1, 10));
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(to_string(Rational(6, 8)) == "3/4");
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}
