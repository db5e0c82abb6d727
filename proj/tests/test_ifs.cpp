#include <algorithm>

#include "doctest.h"
#include "sponge/error.hpp"
#include "sponge/examples.hpp"
#include "sponge/ifs.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

TEST_CASE("permutations format and parse") {
  CHECK(all_permutations(3).size() == 6);
  CHECK(format_ordering({1, 0, 2}) == "(2,1,3)");
  CHECK(parse_ordering("(2,1,3)") == Permutation{1, 0, 2});
  CHECK_THROWS(parse_ordering("(1,1)"));
  CHECK(is_permutation_of({2, 0, 1}, 3));
  CHECK_FALSE(is_permutation_of({2, 0, 0}, 3));
}

TEST_CASE("carpet validates and satisfies the separation condition") {
  auto ifs = examples::baranski_carpet();
  auto rep = validate(ifs);
  CHECK(rep.ok());
  CHECK(rep.lambda_min == doctest::Approx(0.25));
  auto sppc = check_sppc(ifs, all_permutations(2));
  CHECK(sppc.satisfied);
}

TEST_CASE("overlapping images fail the separation check") {
  std::vector<DiagonalMap> maps{{{Rational(6, 10)}, {Rational(0)}}, {{Rational(1, 2)}, {Rational(1, 2)}}};
  SpongeIFS ifs(1, maps);
  CHECK(validate(ifs).ok());
  auto sppc = check_sppc(ifs, all_permutations(1));
  CHECK_FALSE(sppc.satisfied);
  REQUIRE(!sppc.failures.empty());
  CHECK(sppc.failures[0].level == 1);
  CHECK(sppc.failures[0].i == 0);
  CHECK(sppc.failures[0].j == 1);
}

TEST_CASE("maps leaving the unit cube are rejected") {
  std::vector<DiagonalMap> maps{{{Rational(1, 2)}, {Rational(3, 4)}}, {{Rational(1, 4)}, {Rational(0)}}};
  SpongeIFS ifs(1, maps);
  CHECK_FALSE(validate(ifs).ok());
  CHECK_THROWS_AS(require_valid(ifs), ValidationError);
}

TEST_CASE("projected index sets agree with the pairwise reference") {
  for (const auto& name : {"bedford-mcmullen", "lalley-gatzouras", "fraser-jurga"}) {
    auto ifs = load_scene(name).ifs;
    for (const auto& sigma : all_permutations(ifs.dim()))
      for (int n = 1; n <= ifs.dim(); ++n) {
        auto a = project_index_set(ifs, sigma, n);
        auto b = project_index_set_pairwise(ifs, sigma, n);
        CHECK(a.indices == b.indices);
        CHECK(a.proj == b.proj);
      }
  }
}

TEST_CASE("projection of the three-map carpet") {
  auto ifs = load_scene("bedford-mcmullen").ifs;
  // maps at x = 0, 0, 1/2: first coordinate has two classes
  auto p = project_index_set(ifs, {0, 1}, 1);
  CHECK(p.indices == std::vector<int>{0, 2});
  CHECK(p.proj == std::vector<int>{0, 0, 2});
  CHECK(exact_overlap(ifs, 0, 1, {0, 1}, 1));
  CHECK_FALSE(exact_overlap(ifs, 0, 1, {0, 1}, 2));
  auto full = project_index_set(ifs, {0, 1}, 2);
  CHECK(full.count() == 3);
}
