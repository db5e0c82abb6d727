#include <cmath>
#include <random>

#include "doctest.h"
#include "sponge/examples.hpp"
#include "sponge/model.hpp"
#include "sponge/potentials.hpp"
#include "sponge/pressure.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

namespace {
double golden_s() { return std::log((std::sqrt(5.0) - 1) / 2) / std::log(0.5); }
}

TEST_CASE("closed form exponents of the carpet at q = 0") {
  SpongeModel model(examples::baranski_carpet());
  auto phi = zero_potential(model);
  auto cf = solve_closed_form(model, {0, 1}, phi);
  // level 1: 2^-T + 4^-T = 1
  CHECK(cf.exponents[0] == doctest::Approx(golden_s()).epsilon(1e-12));
  CHECK(cf.exponents[1] == doctest::Approx(golden_s()).epsilon(1e-12));
  for (double r : cf.residuals) CHECK(std::fabs(r) < 1e-12);
}

TEST_CASE("t at the dominant stack equals T_d when it is in Q") {
  SpongeModel model(examples::baranski_carpet());
  auto mu = make_measure({0.6, 0.4});
  for (const auto& sigma : model.admissible()) {
    const auto& os = model.system(sigma);
    auto phi = lq_level_potential(os, mu, 0.5);
    auto cf = solve_closed_form(os, phi);
    if (cf.in_Q) CHECK(t_value(os, cf.dominant, phi) == doctest::Approx(cf.exponents.back()).epsilon(1e-10));
  }
}

TEST_CASE("optimizer matches certified closed forms when forced") {
  SpongeModel model(examples::baranski_carpet());
  auto mu = make_measure({0.7, 0.3});
  OptimizerOptions opt;
  opt.force = true;
  for (const auto& sigma : model.admissible()) {
    const auto& os = model.system(sigma);
    auto phi = lq_level_potential(os, mu, 1.5);
    auto cf = solve_closed_form(os, phi);
    auto r = sup_over_Q(os, phi, opt);
    CHECK(r.value <= cf.exponents.back() + 1e-9);
    if (cf.in_Q) CHECK(r.value == doctest::Approx(cf.exponents.back()).epsilon(1e-7));
  }
}

TEST_CASE("spectrum basics on the carpet") {
  SpongeModel model(examples::baranski_carpet());
  auto mu = make_measure({0.5, 0.5});
  CHECK(std::fabs(lq_value(model, mu, 1.0).value) < 1e-10);
  CHECK(lq_value(model, mu, 0.0).value == doctest::Approx(golden_s()).epsilon(1e-10));
  // affine branch above q* at u = 1/2
  CHECK(lq_value(model, mu, 2.0).value == doctest::Approx(-2.0 / 3.0).epsilon(1e-7));
  auto s = lq_spectrum(model, mu, {-1, 0, 1, 2}, {{}, 2});
  REQUIRE(s.points.size() == 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(s.points[i].pressure.value < s.points[i - 1].pressure.value);
}

TEST_CASE("lalley-gatzouras spectrum stays below its upper bound") {
  auto sc = load_scene("lalley-gatzouras");
  SpongeModel model(sc.ifs);
  auto mu = sc.measure_or_uniform();
  REQUIRE(model.admissible().size() == 1);
  for (double q : {-2.0, 0.0, 0.5, 3.0}) {
    auto r = lq_value(model, mu, q);
    CHECK(r.value <= r.upper_bound + 1e-12);
    if (r.certified) CHECK(r.value == doctest::Approx(r.upper_bound));
  }
}

TEST_CASE("dimension bounds sandwich random stacks") {
  auto sc = load_scene("lalley-gatzouras");
  SpongeModel model(sc.ifs);
  auto mu = sc.measure_or_uniform();
  const auto& os = model.system(model.admissible().front());
  auto b = closed_dimension_bounds(os, mu);
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  for (int k = 0; k < 500; ++k) {
    ProbStack P;
    P.ordering = os.ordering;
    for (int n = 1; n <= os.dim(); ++n) {
      std::vector<double> p(os.count(n));
      double s = 0;
      for (auto& v : p) s += (v = e(rng));
      for (auto& v : p) v /= s;
      P.levels.push_back(p);
    }
    double S = S_value(os, P, mu);
    CHECK(S <= b.upper.back() + 1e-9);
    CHECK(S >= b.lower.back() - 1e-9);
  }
}

TEST_CASE("measure dimensions of the self-similar fixture") {
  auto sc = load_scene("self-similar");
  SpongeModel model(sc.ifs);
  auto d = measure_dimensions(model, sc.measure_or_uniform());
  CHECK(d.frostman == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d.box_of_measure == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(d.entropy_dimension_proxy == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(d.asymptote_consistent);
}

TEST_CASE("t differs from T_d by coefficient-weighted relative entropy") {
  auto sc = load_scene("fraser-jurga");
  SpongeModel model(sc.ifs);
  auto mu = sc.measure_or_uniform();
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  for (const auto& sigma : model.admissible()) {
    const auto& os = model.system(sigma);
    for (double q : {-1.5, 0.0, 2.0}) {
      auto phi = lq_level_potential(os, mu, q);
      auto cf = solve_closed_form(os, phi);
      for (int k = 0; k < 50; ++k) {
        ProbStack P;
        P.ordering = sigma;
        for (int n = 1; n <= os.dim(); ++n) {
          std::vector<double> p(os.count(n));
          double s = 0;
          for (auto& v : p) s += (v = e(rng));
          for (auto& v : p) v /= s;
          P.levels.push_back(p);
        }
        auto C = coefficients(os, P).values;
        double rhs = cf.exponents.back();
        for (int n = 0; n < os.dim(); ++n) {
          double kl = 0;
          for (std::size_t i = 0; i < P.levels[n].size(); ++i)
            kl += P.levels[n][i] * std::log(P.levels[n][i] / cf.dominant.levels[n][i]);
          rhs -= C[n] * kl;
        }
        CHECK(t_value(os, P, phi) == doctest::Approx(rhs).epsilon(1e-10));
      }
    }
  }
}
