#include <cmath>

#include "doctest.h"
#include "sponge/examples.hpp"
#include "sponge/model.hpp"
#include "sponge/orderings.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

TEST_CASE("stoppings and scale ordering") {
  auto ifs = examples::baranski_carpet();
  // word 0,0,0,...: x shrinks by 1/2, y by 1/4
  PeriodicWord w{{}, {0}};
  auto L = stoppings(ifs, w, std::ldexp(1.0, -4));
  CHECK(L == std::vector<int>{4, 2});
  CHECK(scale_ordering(ifs, w, std::ldexp(1.0, -4)) == Permutation{0, 1});
  CHECK(ordering_from_stoppings({3, 3, 5}) == Permutation{2, 0, 1});
}

TEST_CASE("exact threshold at the boundary") {
  auto ifs = examples::baranski_carpet();
  PeriodicWord w{{}, {1}};
  // product (1/4)^2 equals delta exactly: L = 2
  CHECK(stopping(ifs, w, 1.0 / 16, 0) == 2);
}

TEST_CASE("coefficients of the uniform carpet stack") {
  SpongeModel model(examples::baranski_carpet());
  const auto& os = model.system({0, 1});
  auto P = uniform_stack(os);
  auto C = coefficients(os, P);
  // chi_1(p_1) = chi_1(p_2) = (log2 + log4)/2 for the x coordinate
  double chi1 = 1.5 * std::log(2.0), chi2 = 1.5 * std::log(2.0);
  double C2 = 1 / chi2;
  double C1 = (1 - C2 * chi1) / chi1;
  CHECK(C.values[1] == doctest::Approx(C2));
  CHECK(C.values[0] == doctest::Approx(C1));
  CHECK(in_Q(os, P) == (C.min() >= -kTolQ));
}

TEST_CASE("coefficient tape gradient matches finite differences") {
  auto ifs = load_scene("lalley-gatzouras").ifs;
  SpongeModel model(ifs);
  const auto& os = model.system(model.admissible().front());
  std::vector<std::vector<double>> lv{{0.6, 0.4}, {0.2, 0.5, 0.3}};
  lv.resize(os.dim());
  for (int n = 1; n <= os.dim(); ++n) lv[n - 1].resize(os.count(n), 1.0 / os.count(n));
  CoefficientTape tape(os, lv);
  std::vector<double> wC(os.dim(), 1.0), wN(os.dim(), 0.0);
  std::vector<std::vector<double>> g(os.dim());
  for (int n = 1; n <= os.dim(); ++n) g[n - 1].assign(os.count(n), 0.0);
  tape.backprop(wC, wN, g);
  auto total = [&](const std::vector<std::vector<double>>& l) {
    CoefficientTape t(os, l);
    double s = 0;
    for (int n = 1; n <= os.dim(); ++n) s += t.C(n);
    return s;
  };
  double base = total(lv);
  for (std::size_t m = 0; m < lv.size(); ++m)
    for (std::size_t k = 0; k < lv[m].size(); ++k) {
      auto l2 = lv;
      l2[m][k] += 1e-7;
      CHECK(g[m][k] == doctest::Approx((total(l2) - base) / 1e-7).epsilon(1e-4));
    }
}

TEST_CASE("admissible orderings of the fixtures") {
  SpongeModel carpet(examples::baranski_carpet());
  CHECK(carpet.admissible().size() == 2);
  SpongeModel bm(load_scene("bedford-mcmullen").ifs);
  CHECK(bm.admissible() == std::vector<Permutation>{{0, 1}});
  Permutation forced;
  CHECK(forced_ordering(bm.ifs(), forced));
  CHECK(forced == Permutation{0, 1});
  SpongeModel fj(load_scene("fraser-jurga").ifs);
  CHECK(fj.is_admissible({0, 1, 2}));
  CHECK(fj.is_admissible({1, 0, 2}));
}
