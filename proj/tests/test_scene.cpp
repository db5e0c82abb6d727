#include <string>

#include "doctest.h"
#include "sponge/error.hpp"
#include "sponge/scene.hpp"

using namespace sponge;

TEST_CASE("all shipped scenes load and round-trip") {
  auto names = builtin_scenes();
  CHECK(names.size() >= 5);
  for (const auto& n : names) {
    auto sc = load_scene(n);
    auto again = parse_scene(serialize_scene(sc));
    REQUIRE(again.ifs.size() == sc.ifs.size());
    for (int i = 0; i < sc.ifs.size(); ++i) {
      CHECK(again.ifs.map(i).diag == sc.ifs.map(i).diag);
      CHECK(again.ifs.map(i).trans == sc.ifs.map(i).trans);
    }
    CHECK(again.weights == sc.weights);
  }
}

TEST_CASE("number forms") {
  auto sc = parse_scene(R"({"dim":1,"maps":[{"diag":["1/3"],"trans":[0]},{"diag":[[1,3]],"trans":[0.5]}]})");
  CHECK(sc.ifs.map(0).diag[0] == Rational(1, 3));
  CHECK(sc.ifs.map(1).diag[0] == Rational(1, 3));
  CHECK(sc.ifs.map(1).trans[0] == Rational(1, 2));
  CHECK_FALSE(sc.weights.has_value());
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_scene("{\n  \"dim\": 1,\n  \"maps\": [\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("semantic errors") {
  CHECK_THROWS_AS(parse_scene(R"({"dim":2,"maps":[{"diag":[0.5],"trans":[0,0]}]})"), ParseError);
  CHECK_THROWS_AS(parse_scene(R"({"maps":[]})"), ParseError);
  CHECK_THROWS_AS(parse_scene(R"({"dim":1,"maps":[{"diag":["x"],"trans":[0]}]})"), ParseError);
  CHECK_THROWS(load_scene("no-such-scene"));
}
