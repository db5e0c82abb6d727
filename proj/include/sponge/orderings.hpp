#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sponge/ifs.hpp"
#include "sponge/numeric.hpp"

namespace sponge {

constexpr double kTolQ = 1e-12;

struct PeriodicWord {
  std::vector<int> preperiod;
  std::vector<int> period;  // non-empty
  int at(std::size_t k) const;
};

/// Decides prod lambda <= delta. Float log sums decide clear cases; near the
/// boundary the product is recomputed exactly from the symbols.
class ScaleThreshold {
 public:
  explicit ScaleThreshold(double delta);
  double delta() const { return delta_; }
  long double log_delta() const { return log_delta_; }
  bool reached(const SpongeIFS& ifs, int coord, long double log_prod,
               std::span<const int> symbols) const;

 private:
  double delta_;
  long double log_delta_;
  Rational exact_;
};

/// Smallest L >= 1 with prod_{l<=L} lambda^(coord)_{i_l} <= delta.
int stopping(const SpongeIFS& ifs, const PeriodicWord& word, double delta, int coord);
std::vector<int> stoppings(const SpongeIFS& ifs, const PeriodicWord& word, double delta);

/// Sort by stopping, largest first; equal stoppings keep increasing coordinate index.
Permutation ordering_from_stoppings(const std::vector<int>& L);
Permutation scale_ordering(const SpongeIFS& ifs, const PeriodicWord& word, double delta);

/// levels[n-1] is a probability vector over I_n (slot order of ProjectedSystem::indices).
struct ProbStack {
  Permutation ordering;
  std::vector<std::vector<double>> levels;
};

ProbStack uniform_stack(const OrderingSystem& os);
/// Level-m vectors obtained by projecting a distribution on all maps.
ProbStack projected_stack(const OrderingSystem& os, std::span<const double> p_full);
/// Checks shape and normalization (1e-12); throws DomainError.
void check_stack(const OrderingSystem& os, const ProbStack& P);

/// chi_n(p) for p on I_m, n <= m.
double lyapunov(const OrderingSystem& os, std::span<const double> p, int m, int n);

struct Coefficients {
  std::vector<double> values;  // C_1..C_d
  double min() const;
};

Coefficients coefficients(const OrderingSystem& os, const ProbStack& P);
bool in_Q(const OrderingSystem& os, const ProbStack& P);

/// Coefficient recursion with a hand-written reverse pass.
/// N_n = 1 - sum_{m>n} C_m chi_n(p_m) (N_d = 1) and C_n = N_n / chi_n(p_n).
class CoefficientTape {
 public:
  CoefficientTape(const OrderingSystem& os, const std::vector<std::vector<double>>& levels);
  double C(int n) const { return C_[n - 1]; }
  double N(int n) const { return N_[n - 1]; }
  double chi(int l, int m) const { return chi_[m - 1][l - 1]; }

  /// Gradient of sum_n wC[n] C_n + wN[n] N_n with respect to the level
  /// vectors, accumulated into grads (grads[m-1] sized like level m).
  void backprop(std::span<const double> wC, std::span<const double> wN,
                std::vector<std::vector<double>>& grads) const;

 private:
  const OrderingSystem* os_;
  int d_;
  std::vector<std::vector<double>> chi_;  // chi_[m-1][l-1]
  std::vector<double> C_, N_;
};

/// Softmax coordinates for levels first..d of a stack (first slot of each
/// level pinned). Levels below `first` are left untouched by decode().
class StackParametrization {
 public:
  StackParametrization(const OrderingSystem& os, int first_level);
  int size() const { return total_; }
  void decode(std::span<const double> z, std::vector<std::vector<double>>& levels) const;
  std::vector<double> encode(const std::vector<std::vector<double>>& levels) const;
  /// dF/dz from dF/dp (grads indexed like levels).
  void chain(const std::vector<std::vector<double>>& levels,
             const std::vector<std::vector<double>>& grads, std::span<double> dz) const;

 private:
  const OrderingSystem* os_;
  int first_, total_ = 0;
  std::vector<int> offset_;  // by level-1
};

struct FeasibleStack {
  double slack = 0.0;  // min_{n<d} N_n at `stack`
  ProbStack stack;
};

/// Multi-start soft-min ascent of min_{n<d} N_n. extra_starts are
/// distributions on all maps, projected to every level.
FeasibleStack max_min_slack(const OrderingSystem& os, const std::vector<std::uint64_t>& seeds,
                            const std::vector<std::vector<double>>& extra_starts = {});

enum class OrderingStatus { CertifiedIn, CertifiedOut, HeuristicOut };
std::string to_string(OrderingStatus s);

struct OrderingVerdict {
  Permutation ordering;
  OrderingStatus status = OrderingStatus::HeuristicOut;
  double best_min_coefficient = 0.0;  // best min_n N_n found (same sign as min C_n)
  std::string reason;
};

struct AdmissibleOrderings {
  std::vector<OrderingVerdict> verdicts;
  std::vector<Permutation> admissible() const;
  const OrderingVerdict* find(const Permutation& sigma) const;
};

struct SearchOptions {
  std::vector<std::uint64_t> seeds = numeric::default_seeds();
  int word_samples = 600;
};

AdmissibleOrderings admissible_orderings(const SpongeIFS& ifs, const SearchOptions& opt = {});

/// Unique ordering forced by the coordinate ordering condition, if any.
bool forced_ordering(const SpongeIFS& ifs, Permutation& out);

}  // namespace sponge
