#include "sponge/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sponge/error.hpp"

namespace sponge {

using nlohmann::json;
namespace fs = std::filesystem;

WeightedMeasure Scene::measure_or_uniform() const {
  return weights ? make_measure(*weights) : uniform_measure(ifs.size());
}

namespace {

void locate(const std::string& text, std::size_t byte, int& line, int& col) {
  line = 1;
  col = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
}

Rational number(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return rational_from_shortest(v.get<double>());
    if (v.is_array() && v.size() == 2) {
      Rational num = number(v[0], where), den = number(v[1], where);
      if (den == 0) throw ParseError("zero denominator");
      return num / den;
    }
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a number, a string or a [num, den] pair");
}

std::vector<Rational> vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

json write_number(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt n = numerator(r), d = denominator(r);
  const BigInt lim = std::numeric_limits<long long>::max();
  if (abs(n) <= lim && d <= lim) {
    if (d == 1) return static_cast<long long>(n);
    return json::array({static_cast<long long>(n), static_cast<long long>(d)});
  }
  return to_string(r);
}

}  // namespace

Scene parse_scene(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line, col;
    locate(text, e.byte > 0 ? e.byte - 1 : 0, line, col);
    std::string msg = e.what();
    auto p = msg.find("parse error");
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         (p == std::string::npos ? msg : msg.substr(p)),
                     line, col);
  }
  if (!doc.is_object()) throw ParseError("scene must be a JSON object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw ParseError("scene needs an integer \"dim\"");
  if (!doc.contains("maps") || !doc["maps"].is_array()) throw ParseError("scene needs a \"maps\" array");
  int dim = doc["dim"].get<int>();
  if (dim < 1 || dim > 16) throw ParseError("\"dim\" must lie in 1..16");
  std::vector<DiagonalMap> maps;
  const auto& ms = doc["maps"];
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::string where = "maps[" + std::to_string(i) + "]";
    if (!ms[i].is_object() || !ms[i].contains("diag") || !ms[i].contains("trans"))
      throw ParseError(where + ": needs \"diag\" and \"trans\"");
    DiagonalMap m{vector_of(ms[i]["diag"], where + ".diag"), vector_of(ms[i]["trans"], where + ".trans")};
    if (static_cast<int>(m.diag.size()) != dim || static_cast<int>(m.trans.size()) != dim)
      throw ParseError(where + ": expected " + std::to_string(dim) + " entries");
    maps.push_back(std::move(m));
  }
  if (maps.empty()) throw ParseError("\"maps\" is empty");
  Scene s;
  s.ifs = SpongeIFS(dim, std::move(maps));
  if (doc.contains("name") && doc["name"].is_string()) s.name = doc["name"].get<std::string>();
  if (doc.contains("notes") && doc["notes"].is_string()) s.notes = doc["notes"].get<std::string>();
  if (doc.contains("measure") && !doc["measure"].is_null()) {
    auto w = vector_of(doc["measure"], "measure");
    if (static_cast<int>(w.size()) != s.ifs.size())
      throw ParseError("measure has " + std::to_string(w.size()) + " weights for " + std::to_string(s.ifs.size()) +
                       " maps");
    std::vector<double> ws;
    for (const auto& r : w) ws.push_back(to_double(r));
    try {
      make_measure(ws);
    } catch (const DomainError& e) {
      throw ParseError(std::string("measure: ") + e.what());
    }
    s.weights = std::move(ws);
  }
  return s;
}

std::string scene_directory() {
  if (const char* env = std::getenv("SPONGE_SPECTRA_SCENES")) return env;
#ifdef SPONGE_SCENE_DIR
  return SPONGE_SCENE_DIR;
#else
  return "data/scenes";
#endif
}

std::vector<std::string> builtin_scenes() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(scene_directory(), ec))
    if (e.path().extension() == ".json") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

Scene load_scene(const std::string& path_or_name) {
  fs::path p(path_or_name);
  if (!fs::exists(p)) {
    fs::path b = fs::path(scene_directory()) / (path_or_name + ".json");
    if (!fs::exists(b)) throw ParseError("no scene file or shipped scene named '" + path_or_name + "'");
    p = b;
  }
  std::ifstream in(p);
  if (!in) throw ParseError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto s = parse_scene(ss.str());
  if (s.name.empty()) s.name = p.stem().string();
  return s;
}

std::string serialize_scene(const Scene& scene) {
  json doc;
  if (!scene.name.empty()) doc["name"] = scene.name;
  if (!scene.notes.empty()) doc["notes"] = scene.notes;
  doc["dim"] = scene.ifs.dim();
  json maps = json::array();
  for (const auto& m : scene.ifs.maps()) {
    json jm;
    jm["diag"] = json::array();
    jm["trans"] = json::array();
    for (const auto& r : m.diag) jm["diag"].push_back(write_number(r));
    for (const auto& r : m.trans) jm["trans"].push_back(write_number(r));
    maps.push_back(std::move(jm));
  }
  doc["maps"] = std::move(maps);
  if (scene.weights) {
    // shortest round-trip text keeps reparsed weights bit-identical
    json w = json::array();
    for (double x : *scene.weights) {
      char buf[64];
      auto r = std::to_chars(buf, buf + sizeof buf, x);
      w.push_back(std::string(buf, r.ptr));
    }
    doc["measure"] = std::move(w);
  }
  return doc.dump(2) + "\n";
}

}  // namespace sponge
