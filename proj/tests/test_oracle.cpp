#include <cmath>

#include "doctest.h"
#include "sponge/error.hpp"
#include "sponge/examples.hpp"
#include "sponge/model.hpp"
#include "sponge/oracle.hpp"
#include "sponge/potentials.hpp"
#include "sponge/pressure.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

TEST_CASE("self-similar cubes are dyadic intervals") {
  auto ifs = load_scene("self-similar").ifs;
  for (int k = 1; k <= 10; ++k) {
    auto n = enumerate_cubes(ifs, std::ldexp(1.0, -k), [](const ApproximateCube&) {});
    CHECK(n == (1u << k));
  }
}

TEST_CASE("carpet cubes have sides near delta") {
  SpongeModel model(examples::baranski_carpet());
  double delta = std::ldexp(1.0, -8);
  auto cubes = collect_cubes(model.ifs(), delta);
  REQUIRE(!cubes.empty());
  for (const auto& c : cubes)
    for (double ls : c.log_sides) {
      CHECK(ls <= std::log(delta) + 1e-12);
      CHECK(ls > std::log(delta) + std::log(model.ifs().lambda_min()) - 1e-12);
    }
}

TEST_CASE("finite scale pressure at q = 1 is zero") {
  auto sc = load_scene("lalley-gatzouras");
  SpongeModel model(sc.ifs);
  auto r = finite_scale_lq(model, sc.measure_or_uniform(), 1.0, std::ldexp(1.0, -10));
  CHECK(std::fabs(r.log_Z) < 1e-12);
  std::uint64_t total = 0;
  for (const auto& [s, n] : r.count_by_ordering) total += n;
  CHECK(total == r.cube_count);
}

TEST_CASE("enumeration refuses over budget") {
  auto ifs = examples::baranski_carpet();
  OracleOptions opt;
  opt.budget = 100;
  CHECK_THROWS_AS(enumerate_cubes(ifs, std::ldexp(1.0, -16), [](const ApproximateCube&) {}, opt), BudgetExceeded);
  CHECK_THROWS_AS(enumerate_cubes(ifs, 1.5, [](const ApproximateCube&) {}), DomainError);
}

TEST_CASE("finite scale estimates approach the spectrum") {
  SpongeModel model(examples::baranski_carpet());
  auto mu = make_measure({0.6, 0.4});
  double var = lq_value(model, mu, 0.0).value;
  double e10 = std::fabs(finite_scale_lq(model, mu, 0.0, std::ldexp(1.0, -10)).estimate - var);
  double e16 = std::fabs(finite_scale_lq(model, mu, 0.0, std::ldexp(1.0, -16)).estimate - var);
  CHECK(e16 < e10);
  CHECK(e16 < 3.0 / 16);
}

TEST_CASE("type census counts every cube") {
  SpongeModel model(examples::baranski_carpet());
  double delta = std::ldexp(1.0, -8);
  for (const auto& sigma : model.admissible()) {
    auto cen = type_census(model, delta, sigma);
    std::uint64_t total = 0;
    for (const auto& t : cen.types) total += t.count;
    CHECK(total == cen.cube_count);
    CHECK(cen.type_count_ok);
  }
}

TEST_CASE("measure extremes bracket the uniform exponent") {
  auto sc = load_scene("self-similar");
  SpongeModel model(sc.ifs);
  auto e = finite_scale_measure_extremes(model, sc.measure_or_uniform(), std::ldexp(1.0, -8));
  CHECK(e.min_exponent == doctest::Approx(1.0));
  CHECK(e.max_exponent == doctest::Approx(1.0));
}
