#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sponge/ifs.hpp"
#include "sponge/potentials.hpp"

namespace sponge {

struct Scene {
  std::string name;
  std::string notes;
  SpongeIFS ifs;
  std::optional<std::vector<double>> weights;  // as written; normalized on use

  WeightedMeasure measure_or_uniform() const;
};

/// JSON: {"dim": d, "maps": [{"diag": [...], "trans": [...]}, ...], "measure": [...]}.
/// Numbers may be JSON numbers, decimal or "p/q" strings, or [num, den] pairs.
/// Throws ParseError (with line/column for syntax errors).
Scene parse_scene(const std::string& text);
/// A path, or the name of a shipped scene ("baranski-planar").
Scene load_scene(const std::string& path_or_name);
std::string serialize_scene(const Scene& scene);

std::string scene_directory();
std::vector<std::string> builtin_scenes();

}  // namespace sponge
