#pragma once

#include <map>
#include <utility>
#include <vector>

#include "sponge/cube.hpp"
#include "sponge/model.hpp"

namespace sponge {

struct WeightedMeasure {
  std::vector<double> weights;
};

/// Checks positivity and normalization (1e-9), then renormalizes exactly. Throws DomainError.
WeightedMeasure make_measure(std::vector<double> weights);
WeightedMeasure uniform_measure(int n);

/// mu_n(i) = sum over j projecting to i, indexed by slot of I_n.
std::vector<double> project_measure(const OrderingSystem& os, const WeightedMeasure& mu, int n);

/// [n-1][slot] values on I_n for one ordering.
using LevelPotential = std::vector<std::vector<double>>;

struct PotentialFamily {
  std::map<Permutation, LevelPotential> table;
  const LevelPotential& at(const Permutation& sigma) const;
};

PotentialFamily zero_potential(const SpongeModel& model);
/// q log mu_n(i) on every admissible ordering.
PotentialFamily lq_potential(const SpongeModel& model, const WeightedMeasure& mu, double q);
LevelPotential lq_level_potential(const OrderingSystem& os, const WeightedMeasure& mu, double q);

/// Sum of phi over the cube's blocks.
double phi_value(const ApproximateCube& cube, const PotentialFamily& phi);

struct CubeMeasure {
  double log_value = 0.0;
  double value = 1.0;
};

CubeMeasure cube_measure(const SpongeModel& model, const ApproximateCube& cube, const WeightedMeasure& mu);

/// f(alpha) = min over grid of q*alpha + T(q), at alpha = minus each secant slope.
/// Returns distinct (alpha, f) pairs sorted by alpha.
std::vector<std::pair<double, double>> legendre_transform(const std::vector<double>& q,
                                                          const std::vector<double>& T);

}  // namespace sponge
