#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "sponge/cube.hpp"
#include "sponge/model.hpp"
#include "sponge/potentials.hpp"

namespace sponge {

struct OracleOptions {
  std::uint64_t budget = 100'000'000;  // max number of cubes
};

/// Rough cube count at scale delta: delta^(-max_sigma T_d(0)) * (1/lambda_min)^d.
double estimate_cube_count(const SpongeIFS& ifs, double delta);

/// Depth-first enumeration of all symbolic delta-approximate cubes. Refuses
/// (BudgetExceeded) when the estimate or the running count passes the budget.
/// Returns the number of cubes visited.
std::uint64_t enumerate_cubes(const SpongeIFS& ifs, double delta,
                              const std::function<void(const ApproximateCube&)>& visit,
                              const OracleOptions& opt = {});
std::vector<ApproximateCube> collect_cubes(const SpongeIFS& ifs, double delta, const OracleOptions& opt = {});

struct FiniteScalePressure {
  double delta = 0.0;
  double log_Z = 0.0;     // log sum over cubes of exp(Phi)
  double estimate = 0.0;  // log_Z / (-log delta)
  std::map<Permutation, double> log_Z_by_ordering;
  std::map<Permutation, std::uint64_t> count_by_ordering;
  std::uint64_t cube_count = 0;
  double seconds = 0.0;
};

/// Phi(B) = sum of phi over the cube's blocks. Throws Error if a cube carries an
/// ordering the family does not cover.
FiniteScalePressure finite_scale_pressure(const SpongeModel& model, const PotentialFamily& phi, double delta,
                                          const OracleOptions& opt = {});
/// Phi(B) = q log mu(B).
FiniteScalePressure finite_scale_lq(const SpongeModel& model, const WeightedMeasure& mu, double q, double delta,
                                    const OracleOptions& opt = {});

/// Symbol counts per level (slots of I_n) plus block lengths.
struct TypeVector {
  Permutation ordering;
  std::vector<std::vector<int>> counts;
  std::vector<int> lengths;
  auto operator<=>(const TypeVector&) const = default;
  /// Normalized frequencies; zero-length blocks give the zero vector.
  std::vector<std::vector<double>> frequencies() const;
};

struct TypeCheck {
  TypeVector type;
  std::uint64_t count = 0;
  double log_lower = 0.0, log_upper = 0.0;  // class-size bounds
  bool class_bounds_ok = false;
  std::vector<double> C;       // coefficients of the type
  bool stopping_sandwich_ok = false;
};

struct TypeCensus {
  Permutation ordering;
  double delta = 0.0;
  std::vector<TypeCheck> types;
  std::uint64_t cube_count = 0;
  double log_type_bound = 0.0;  // log prod (max len_n + 1)^(#I_n + 1)
  bool class_bounds_ok = true;
  bool stopping_sandwich_ok = true;
  bool type_count_ok = true;
};

/// Coefficients of a frequency stack; levels with zero length get C_n = 0.
std::vector<double> type_coefficients(const OrderingSystem& os, const TypeVector& t);

TypeCensus type_census(const SpongeModel& model, double delta, const Permutation& sigma,
                       const OracleOptions& opt = {});

struct MeasureExtremes {
  double max_log = 0.0, min_log = 0.0;  // log mu(B)
  double min_exponent = 0.0;            // max_log / log delta
  double max_exponent = 0.0;            // min_log / log delta
  std::map<Permutation, std::pair<double, double>> by_ordering;  // (min_exponent, max_exponent)
  std::uint64_t cube_count = 0;
};

MeasureExtremes finite_scale_measure_extremes(const SpongeModel& model, const WeightedMeasure& mu, double delta,
                                              const OracleOptions& opt = {});

}  // namespace sponge
