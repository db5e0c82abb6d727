#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sponge/rational.hpp"

namespace sponge {

/// Coordinate ordering. 0-based: perm[k] is the coordinate in position k+1.
/// External formats (CLI, JSON, Python) print it 1-based.
using Permutation = std::vector<int>;

Permutation identity_permutation(int d);
std::vector<Permutation> all_permutations(int d);
std::string format_ordering(const Permutation& sigma);  // "(1,2,3)"
Permutation parse_ordering(const std::string& text);    // inverse of the above
bool is_permutation_of(const Permutation& sigma, int d);

struct DiagonalMap {
  std::vector<Rational> diag;
  std::vector<Rational> trans;
};

/// Diagonal self-affine IFS on [0,1]^d. Holds exact coefficients plus cached
/// float logs. Construction only checks shapes; see validate().
class SpongeIFS {
 public:
  SpongeIFS() = default;
  SpongeIFS(int dim, std::vector<DiagonalMap> maps);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(maps_.size()); }
  const DiagonalMap& map(int i) const { return maps_.at(i); }
  const std::vector<DiagonalMap>& maps() const { return maps_; }

  const Rational& ratio(int i, int c) const { return ratio_[i * dim_ + c]; }  // |a|
  double lambda(int i, int c) const { return lambda_[i * dim_ + c]; }
  double log_lambda(int i, int c) const { return log_lambda_[i * dim_ + c]; }
  /// Equal ids iff maps i and j have the same diagonal entry and translation in coordinate c.
  int coord_class(int i, int c) const { return coord_id_[i * dim_ + c]; }
  double lambda_min() const { return lambda_min_; }
  double lambda_max() const { return lambda_max_; }

  /// Image interval of [0,1] under coordinate c of map i, as an ordered hull.
  std::pair<Rational, Rational> interval(int i, int c) const;

 private:
  int dim_ = 0;
  std::vector<DiagonalMap> maps_;
  std::vector<Rational> ratio_;
  std::vector<double> lambda_, log_lambda_;
  std::vector<int> coord_id_;
  double lambda_min_ = 0.0, lambda_max_ = 0.0;
};

struct Violation {
  std::string kind;
  std::string message;
  int map = -1;    // 0-based, -1 when not tied to a map
  int coord = -1;  // 0-based
};

struct ValidationReport {
  std::vector<Violation> violations;
  double lambda_min = 0.0;
  double r0 = 0.0;  // largest r with every face avoided by some image at distance >= r
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const SpongeIFS& ifs);

/// Throws ValidationError listing the violations.
void require_valid(const SpongeIFS& ifs);

/// Maps i, j agree (diag and trans) in coordinates sigma[0..n-1]. n is 1..d.
bool exact_overlap(const SpongeIFS& ifs, int i, int j, const Permutation& sigma, int n);

struct ProjectedSystem {
  Permutation ordering;
  int level = 0;                // n, 1..d
  std::vector<int> indices;     // I_n, increasing
  std::vector<int> proj;        // proj[j] in I_n, for every j
  std::vector<int> position;    // position[i] = slot of i in indices, -1 if i not in I_n

  int slot_of(int j) const { return position[proj[j]]; }
  int count() const { return static_cast<int>(indices.size()); }
};

/// I_n and the projection, grouping maps by their exact coefficients in the
/// first n ordered coordinates; lowest index represents each class.
ProjectedSystem project_index_set(const SpongeIFS& ifs, const Permutation& sigma, int n);

/// Literal pairwise removal loop (O(N^2 d)); same result, kept as a reference.
ProjectedSystem project_index_set_pairwise(const SpongeIFS& ifs, const Permutation& sigma, int n);

/// All levels of one ordering plus the log-ratio tables used by the
/// numerics: loglam[m-1][l-1][k] = log lambda of the k-th element of I_m in
/// coordinate sigma_l, for l <= m.
struct OrderingSystem {
  Permutation ordering;
  std::vector<ProjectedSystem> levels;
  std::vector<std::vector<std::vector<double>>> loglam;

  int dim() const { return static_cast<int>(levels.size()); }
  const ProjectedSystem& level(int n) const { return levels.at(n - 1); }
  int count(int n) const { return levels.at(n - 1).count(); }
};

OrderingSystem build_ordering_system(const SpongeIFS& ifs, const Permutation& sigma);

struct SppcWitness {
  Permutation ordering;
  int level = 0;
  int i = -1, j = -1;
};

struct SppcReport {
  bool satisfied = true;
  bool very_strong = true;
  std::vector<SppcWitness> failures;              // open boxes intersect
  std::vector<SppcWitness> very_strong_failures;  // closed boxes intersect
};

SppcReport check_sppc(const SpongeIFS& ifs, const std::vector<Permutation>& admissible);

}  // namespace sponge
