#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sponge/model.hpp"
#include "sponge/orderings.hpp"
#include "sponge/potentials.hpp"

namespace sponge {

struct ClosedFormResult {
  Permutation ordering;
  std::vector<double> exponents;  // T_1..T_d
  ProbStack dominant;             // P*
  bool in_Q = false;
  std::vector<double> residuals;  // (left side - 1) per level
  Coefficients coefficients;      // at P*
};

/// Sequential roots of sum_i exp(phi_n(i)) prod_{l<=n} lambda_i^(sigma_l)^(T_l - T_{l-1}) = 1.
ClosedFormResult solve_closed_form(const OrderingSystem& os, const LevelPotential& phi);
ClosedFormResult solve_closed_form(const SpongeModel& model, const Permutation& sigma,
                                   const PotentialFamily& phi);

/// sum_n C_n (H(p_n) + <p_n, phi_n>).
double t_value(const OrderingSystem& os, const ProbStack& P, const LevelPotential& phi);

struct OptimizerOptions {
  std::vector<std::uint64_t> seeds = numeric::default_seeds();
  bool force = false;  // run the optimizer even when the closed form is certified
};

struct OrderingPressure {
  Permutation ordering;
  double value = 0.0;          // sup over Q (lower bound unless certified); -inf if Q looks empty
  ProbStack argmax;
  bool certified = false;      // P* in Q, value = T_d
  bool feasible = true;        // a point of Q was found
  double upper_bound = 0.0;    // T_d
  std::string method;          // "closed-form" | "optimizer"
};

OrderingPressure sup_over_Q(const OrderingSystem& os, const LevelPotential& phi,
                            const OptimizerOptions& opt = {});
/// Throws DomainError unless sigma is admissible.
OrderingPressure sup_over_Q(const SpongeModel& model, const Permutation& sigma,
                            const PotentialFamily& phi, const OptimizerOptions& opt = {});

struct PressureResult {
  double value = 0.0;
  std::vector<OrderingPressure> per_ordering;
  Permutation argmax_ordering;
  bool certified = false;    // P* in Q for the ordering with the largest T_d
  double upper_bound = 0.0;  // max_sigma T_d
  bool symbolic_only = false;  // SPPC failed
  double gap() const { return upper_bound - value; }
};

PressureResult variational_pressure(const SpongeModel& model, const PotentialFamily& phi,
                                    const OptimizerOptions& opt = {});

struct SpectrumPoint {
  double q = 0.0;
  PressureResult pressure;
};

struct SpectrumOptions {
  OptimizerOptions optimizer{};
  int threads = 1;
};

struct SpectrumResult {
  std::vector<SpectrumPoint> points;
  bool symbolic_only = false;
};

SpectrumResult lq_spectrum(const SpongeModel& model, const WeightedMeasure& mu,
                           const std::vector<double>& q_grid, const SpectrumOptions& opt = {});
PressureResult lq_value(const SpongeModel& model, const WeightedMeasure& mu, double q,
                        const OptimizerOptions& opt = {});

PressureResult box_dimension(const SpongeModel& model, const OptimizerOptions& opt = {});

/// -sum_n C_n <p_n, log mu_n>.
double S_value(const OrderingSystem& os, const ProbStack& P, const WeightedMeasure& mu);

struct DimensionBounds {
  Permutation ordering;
  std::vector<double> upper;                // S-bar_1..d
  std::vector<double> lower;                // S-under_1..d
  std::vector<std::vector<int>> argmax;     // per level, all maximizing maps (ties)
  std::vector<std::vector<int>> argmin;
  ProbStack K_upper, K_lower;               // degenerate stacks on the first argmax/argmin
};

DimensionBounds closed_dimension_bounds(const OrderingSystem& os, const WeightedMeasure& mu);

struct OrderingDimension {
  Permutation ordering;
  DimensionBounds bounds;
  double inf_S = 0.0, sup_S = 0.0;
  ProbStack inf_argmin, sup_argmax;
  bool inf_certified = false, sup_certified = false;
  bool feasible = true;
};

struct DimensionResult {
  double frostman = 0.0;      // clamped at 0
  double frostman_raw = 0.0;
  double box_of_measure = 0.0;
  double closed_lower_frostman = 0.0;  // max(0, min_sigma S-under_d)
  double closed_upper_box = 0.0;       // max_sigma S-bar_d
  bool certified = false;
  std::vector<OrderingDimension> per_ordering;
  // T(q)/(-q) at q = +-200 and the bound it must respect
  double asymptote_plus = 0.0, asymptote_minus = 0.0, asymptote_bound = 0.0;
  bool asymptote_consistent = false;
  double entropy_dimension_proxy = 0.0;  // -T'(1)
  bool symbolic_only = false;
};

DimensionResult measure_dimensions(const SpongeModel& model, const WeightedMeasure& mu,
                                   const OptimizerOptions& opt = {});

/// -T'(1) by central difference: h = 1e-5 on certified values, else 1e-3.
double entropy_dimension_proxy(const SpongeModel& model, const WeightedMeasure& mu,
                               const OptimizerOptions& opt = {});

}  // namespace sponge
