#include <cmath>

#include "doctest.h"
#include "sponge/error.hpp"
#include "sponge/examples.hpp"
#include "sponge/model.hpp"
#include "sponge/oracle.hpp"
#include "sponge/potentials.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

TEST_CASE("measures normalize and reject bad weights") {
  auto mu = make_measure({0.3, 0.7});
  CHECK(mu.weights[0] + mu.weights[1] == 1.0);
  CHECK_THROWS_AS(make_measure({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(make_measure({1.0, 0.0}), DomainError);
  CHECK(uniform_measure(4).weights[2] == 0.25);
}

TEST_CASE("projected measure sums over classes") {
  SpongeModel bm(load_scene("bedford-mcmullen").ifs);
  const auto& os = bm.system({0, 1});
  auto mu = make_measure({0.2, 0.3, 0.5});
  auto m1 = project_measure(os, mu, 1);
  CHECK(m1.size() == 2);
  CHECK(m1[0] == doctest::Approx(0.5));
  CHECK(m1[1] == doctest::Approx(0.5));
  auto lv = lq_level_potential(os, mu, 2.0);
  CHECK(lv[0][0] == doctest::Approx(2 * std::log(0.5)));
  CHECK(lv[1][2] == doctest::Approx(2 * std::log(0.5)));
}

TEST_CASE("cube measure is the product of the last-level weights") {
  auto sc = load_scene("lalley-gatzouras");
  SpongeModel model(sc.ifs);
  auto mu = sc.measure_or_uniform();
  auto cubes = collect_cubes(model.ifs(), 1.0 / 8);
  REQUIRE(!cubes.empty());
  double total = 0;
  for (const auto& c : cubes) total += cube_measure(model, c, mu).value;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("legendre transform of a line is a point") {
  std::vector<double> q{-1, 0, 1, 2}, T{2, 1, 0, -1};
  auto f = legendre_transform(q, T);
  REQUIRE(f.size() == 1);
  CHECK(f[0].first == doctest::Approx(1.0));
  CHECK(f[0].second == doctest::Approx(1.0));
}
