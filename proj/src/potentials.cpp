#include "sponge/potentials.hpp"

#include <algorithm>
#include <cmath>

#include "sponge/error.hpp"

namespace sponge {

WeightedMeasure make_measure(std::vector<double> w) {
  if (w.empty()) throw DomainError("empty measure");
  double s = 0.0;
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("measure weights must be strictly positive");
    s += x;
  }
  if (std::fabs(s - 1.0) > 1e-9) throw DomainError("measure weights must sum to 1");
  for (auto& x : w) x /= s;
  return {std::move(w)};
}

WeightedMeasure uniform_measure(int n) { return {std::vector<double>(n, 1.0 / n)}; }

std::vector<double> project_measure(const OrderingSystem& os, const WeightedMeasure& mu, int n) {
  const auto& lv = os.level(n);
  if (mu.weights.size() != lv.proj.size()) throw DomainError("measure length does not match the map count");
  std::vector<double> out(lv.count(), 0.0);
  for (std::size_t j = 0; j < mu.weights.size(); ++j) out[lv.slot_of(static_cast<int>(j))] += mu.weights[j];
  return out;
}

const LevelPotential& PotentialFamily::at(const Permutation& sigma) const {
  auto it = table.find(sigma);
  if (it == table.end()) throw DomainError("potential not defined for ordering " + format_ordering(sigma));
  return it->second;
}

PotentialFamily zero_potential(const SpongeModel& model) {
  PotentialFamily f;
  for (const auto& sigma : model.admissible()) {
    const auto& os = model.system(sigma);
    LevelPotential lp;
    for (int n = 1; n <= os.dim(); ++n) lp.emplace_back(os.count(n), 0.0);
    f.table.emplace(sigma, std::move(lp));
  }
  return f;
}

LevelPotential lq_level_potential(const OrderingSystem& os, const WeightedMeasure& mu, double q) {
  LevelPotential lp;
  for (int n = 1; n <= os.dim(); ++n) {
    auto m = project_measure(os, mu, n);
    for (auto& v : m) v = q == 0.0 ? 0.0 : q * std::log(v);
    lp.push_back(std::move(m));
  }
  return lp;
}

PotentialFamily lq_potential(const SpongeModel& model, const WeightedMeasure& mu, double q) {
  if (static_cast<int>(mu.weights.size()) != model.size())
    throw DomainError("measure length does not match the map count");
  PotentialFamily f;
  for (const auto& sigma : model.admissible())
    f.table.emplace(sigma, lq_level_potential(model.system(sigma), mu, q));
  return f;
}

double phi_value(const ApproximateCube& cube, const PotentialFamily& phi) {
  const auto& lp = phi.at(cube.ordering);
  double s = 0.0;
  for (std::size_t n = 0; n < cube.slots.size(); ++n)
    for (int k : cube.slots[n]) s += lp[n][k];
  return s;
}

CubeMeasure cube_measure(const SpongeModel& model, const ApproximateCube& cube, const WeightedMeasure& mu) {
  const auto& os = model.system(cube.ordering);
  double lg = 0.0, v = 1.0;
  for (int n = 1; n <= os.dim(); ++n) {
    if (cube.slots[n - 1].empty()) continue;
    auto m = project_measure(os, mu, n);
    for (int k : cube.slots[n - 1]) {
      lg += std::log(m[k]);
      v *= m[k];
    }
  }
  // direct product is more accurate unless it underflowed
  return {lg, v > 0.0 ? v : std::exp(lg)};
}

std::vector<std::pair<double, double>> legendre_transform(const std::vector<double>& q,
                                                          const std::vector<double>& T) {
  if (q.size() != T.size()) throw DomainError("q and T must have the same length");
  if (q.size() < 2) throw DomainError("Legendre transform needs at least two samples");
  std::vector<std::size_t> order(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return q[a] < q[b]; });
  std::vector<double> alphas;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    double dq = q[order[k + 1]] - q[order[k]];
    if (dq <= 0.0) continue;
    alphas.push_back(-(T[order[k + 1]] - T[order[k]]) / dq);
  }
  std::sort(alphas.begin(), alphas.end());
  std::vector<std::pair<double, double>> out;
  for (double a : alphas) {
    if (!out.empty() && std::fabs(a - out.back().first) <= 1e-12 * std::max(1.0, std::fabs(a))) continue;
    double f = INFINITY;
    for (std::size_t k = 0; k < q.size(); ++k) f = std::min(f, q[k] * a + T[k]);
    out.emplace_back(a, f);
  }
  return out;
}

}  // namespace sponge
