#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sponge::numeric {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum exp(x)). Empty input gives -inf.
double log_sum_exp(std::span<const double> xs);

/// Streaming log-sum-exp. Order of add() calls fixes the rounding, so a
/// sequential feed is bit-reproducible.
class LogSum {
 public:
  void add(double x);
  void merge(const LogSum& other);
  double value() const;
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;  // sum of exp(x - max_)
};

/// Shannon entropy with 0 log 0 = 0.
double entropy(std::span<const double> p);

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Root of a strictly decreasing f. Bracket [-B, B] grows geometrically from
/// B = 1 until a sign change, then bisection, then Newton polish (kept inside
/// the bracket). Stops when |f| <= tol.
RootResult solve_decreasing(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double tol = 1e-13);

/// f(x, grad) returns the value and fills grad (same size as x).
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct BfgsOptions {
  int max_iter = 400;
  double grad_tol = 1e-10;
  double step_tol = 1e-15;
};

/// Dense BFGS with backtracking Armijo line search.
MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                             const BfgsOptions& opt = {});

/// One smooth constraint g(x) >= 0 (or == 0), value and gradient.
struct Constraint {
  Objective g;
  bool equality = false;
};

struct AugLagOptions {
  int max_outer = 40;
  double rho0 = 10.0;
  double feas_tol = 1e-12;
  BfgsOptions inner{};
};

struct AugLagResult {
  std::vector<double> x;
  double objective = 0.0;   // f(x), the maximized quantity
  double violation = 0.0;   // max constraint violation at x
  std::vector<double> multipliers;
};

/// Maximize f subject to constraints, Powell-Hestenes-Rockafellar augmented Lagrangian.
AugLagResult maximize_constrained(const Objective& f, const std::vector<Constraint>& cons,
                                  std::vector<double> x0, const AugLagOptions& opt = {});

/// Softmax with the first logit pinned at 0: z has size n-1, output size n.
void softmax_pinned(std::span<const double> z, std::span<double> p);

/// Chain rule back through softmax_pinned: given dF/dp, write dF/dz.
void softmax_pinned_grad(std::span<const double> p, std::span<const double> dp,
                         std::span<double> dz);

/// Default multi-start seeds 0..31, shifted by SPONGE_SPECTRA_SEED when set.
std::vector<std::uint64_t> default_seeds();

}  // namespace sponge::numeric
