#include "sponge/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "sponge/error.hpp"

namespace sponge {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_potential(const OrderingSystem& os, const LevelPotential& phi) {
  if (static_cast<int>(phi.size()) != os.dim()) throw DomainError("potential needs one table per level");
  for (int n = 1; n <= os.dim(); ++n) {
    if (static_cast<int>(phi[n - 1].size()) != os.count(n)) throw DomainError("potential table has the wrong length");
    for (double v : phi[n - 1])
      if (!std::isfinite(v)) throw DomainError("non-finite potential value");
  }
}

}  // namespace

ClosedFormResult solve_closed_form(const OrderingSystem& os, const LevelPotential& phi) {
  check_potential(os, phi);
  const int d = os.dim();
  ClosedFormResult r;
  r.ordering = os.ordering;
  r.dominant.ordering = os.ordering;
  std::vector<double> T(d + 1, 0.0);  // T[0] = 0
  for (int n = 1; n <= d; ++n) {
    const int K = os.count(n);
    std::vector<double> b(K), c = os.loglam[n - 1][n - 1];
    for (int k = 0; k < K; ++k) {
      double v = phi[n - 1][k];
      for (int l = 1; l < n; ++l) v += (T[l] - T[l - 1]) * os.loglam[n - 1][l - 1][k];
      b[k] = v;
    }
    std::vector<double> e(K);
    auto F = [&](double x) {
      for (int k = 0; k < K; ++k) e[k] = b[k] + x * c[k];
      return numeric::log_sum_exp(e);
    };
    auto dF = [&](double x) {
      double f = F(x), s = 0.0;
      for (int k = 0; k < K; ++k) s += std::exp(e[k] - f) * c[k];
      return s;
    };
    auto root = numeric::solve_decreasing(F, dF, 1e-13);
    T[n] = T[n - 1] + root.x;
    double lse = F(root.x);
    std::vector<double> p(K);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) sum += (p[k] = std::exp(e[k]));
    for (auto& v : p) v /= sum;
    r.residuals.push_back(std::expm1(lse));
    r.dominant.levels.push_back(std::move(p));
  }
  r.exponents.assign(T.begin() + 1, T.end());
  r.coefficients = coefficients(os, r.dominant);
  r.in_Q = r.coefficients.min() >= -kTolQ;
  return r;
}

ClosedFormResult solve_closed_form(const SpongeModel& model, const Permutation& sigma,
                                   const PotentialFamily& phi) {
  return solve_closed_form(model.system(sigma), phi.at(sigma));
}

double t_value(const OrderingSystem& os, const ProbStack& P, const LevelPotential& phi) {
  check_stack(os, P);
  check_potential(os, phi);
  CoefficientTape tape(os, P.levels);
  double t = 0.0;
  for (int n = 1; n <= os.dim(); ++n) {
    const auto& p = P.levels[n - 1];
    t += tape.C(n) * (numeric::entropy(p) + dot(p, phi[n - 1]));
  }
  return t;
}

double S_value(const OrderingSystem& os, const ProbStack& P, const WeightedMeasure& mu) {
  check_stack(os, P);
  CoefficientTape tape(os, P.levels);
  double s = 0.0;
  for (int n = 1; n <= os.dim(); ++n) {
    auto m = project_measure(os, mu, n);
    double acc = 0.0;
    for (int k = 0; k < os.count(n); ++k)
      if (P.levels[n - 1][k] > 0.0) acc += P.levels[n - 1][k] * std::log(m[k]);
    s -= tape.C(n) * acc;
  }
  return s;
}

namespace {

// Level payoff A_n(p) = [H(p)] + <p, lin_n>. The objective is
// sum_n C_n A_n; level 1 is eliminated: its best contribution is N_1 * best1
// at p_1 = arg1, since N_1 does not depend on p_1.
struct Payoff {
  bool entropy = false;
  std::vector<std::vector<double>> lin;
  double best1 = 0.0;
  std::vector<double> arg1;
};

struct Candidate {
  std::vector<std::vector<double>> levels;
  double value = -INFINITY;
  double slack = -INFINITY;
};

class ReducedProblem {
 public:
  ReducedProblem(const OrderingSystem& os, Payoff pay) : os_(os), pay_(std::move(pay)), sp_(os, 2) {
    d_ = os.dim();
    levels_.resize(d_);
    levels_[0] = pay_.arg1;
    grads_.resize(d_);
  }

  const StackParametrization& param() const { return sp_; }

  double value_of(const std::vector<std::vector<double>>& lv) const {
    CoefficientTape tape(os_, lv);
    double v = tape.N(1) * pay_.best1;
    for (int n = 2; n <= d_; ++n) v += tape.C(n) * payoff(n, lv[n - 1]);
    return v;
  }

  double slack_of(const std::vector<std::vector<double>>& lv) const {
    CoefficientTape tape(os_, lv);
    double m = INFINITY;
    for (int n = 1; n < d_; ++n) m = std::min(m, tape.N(n));
    return m;
  }

  std::vector<std::vector<double>> decode(std::span<const double> z) const {
    auto lv = levels_;
    sp_.decode(z, lv);
    return lv;
  }

  numeric::Objective objective() {
    return [this](std::span<const double> z, std::span<double> gz) {
      sp_.decode(z, levels_);
      CoefficientTape tape(os_, levels_);
      std::vector<double> wC(d_, 0.0), wN(d_, 0.0);
      wN[0] = pay_.best1;
      double v = tape.N(1) * pay_.best1;
      for (int n = 2; n <= d_; ++n) {
        double a = payoff(n, levels_[n - 1]);
        wC[n - 1] = a;
        v += tape.C(n) * a;
      }
      reset_grads();
      tape.backprop(wC, wN, grads_);
      for (int n = 2; n <= d_; ++n) {
        const auto& p = levels_[n - 1];
        for (std::size_t k = 0; k < p.size(); ++k) {
          double g = pay_.lin[n - 1][k];
          if (pay_.entropy) g += -std::log(std::max(p[k], 1e-300)) - 1.0;
          grads_[n - 1][k] += tape.C(n) * g;
        }
      }
      sp_.chain(levels_, grads_, gz);
      return v;
    };
  }

  numeric::Objective constraint(int n) {
    return [this, n](std::span<const double> z, std::span<double> gz) {
      sp_.decode(z, levels_);
      CoefficientTape tape(os_, levels_);
      std::vector<double> wC(d_, 0.0), wN(d_, 0.0);
      wN[n - 1] = 1.0;
      reset_grads();
      tape.backprop(wC, wN, grads_);
      sp_.chain(levels_, grads_, gz);
      return tape.N(n);
    };
  }

 private:
  double payoff(int n, const std::vector<double>& p) const {
    double a = dot(p, pay_.lin[n - 1]);
    if (pay_.entropy) a += numeric::entropy(p);
    return a;
  }
  void reset_grads() {
    for (int m = 1; m <= d_; ++m) grads_[m - 1].assign(levels_[m - 1].size(), 0.0);
  }

  const OrderingSystem& os_;
  Payoff pay_;
  StackParametrization sp_;
  int d_;
  std::vector<std::vector<double>> levels_, grads_;
};

std::vector<std::vector<double>> blend(const std::vector<std::vector<double>>& a,
                                       const std::vector<std::vector<double>>& b, double theta) {
  auto out = a;
  for (std::size_t n = 1; n < a.size(); ++n)
    for (std::size_t k = 0; k < a[n].size(); ++k) out[n][k] = (1.0 - theta) * a[n][k] + theta * b[n][k];
  return out;
}

// Smallest blend toward a feasible anchor that is feasible (bisection).
std::vector<std::vector<double>> restore(const ReducedProblem& prob,
                                         const std::vector<std::vector<double>>& x,
                                         const std::vector<std::vector<double>>& anchor) {
  if (prob.slack_of(x) >= 0.0) return x;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (prob.slack_of(blend(x, anchor, mid)) >= 0.0 ? hi : lo) = mid;
  }
  return blend(x, anchor, hi);
}

struct ReducedResult {
  bool feasible = false;
  double value = -INFINITY;
  std::vector<std::vector<double>> levels;
};

// Maximize the reduced objective over Q.
ReducedResult maximize_over_Q(const OrderingSystem& os, const Payoff& pay,
                              const std::vector<std::vector<std::vector<double>>>& warm,
                              const std::vector<std::uint64_t>& seeds, bool vertex_scan) {
  const int d = os.dim();
  ReducedProblem prob(os, pay);
  ReducedResult out;
  auto anchor_fs = max_min_slack(os, seeds);
  if (anchor_fs.slack < -kTolQ) return out;  // Q looks empty
  auto anchor = anchor_fs.stack.levels;
  anchor[0] = pay.arg1;
  if (prob.slack_of(anchor) < 0.0) {
    // boundary-only feasibility: accept the anchor within tolerance
  }

  Candidate best;
  auto consider = [&](std::vector<std::vector<double>> lv) {
    lv[0] = pay.arg1;
    if (prob.slack_of(lv) < 0.0) {
      if (anchor_fs.slack < 0.0) {
        if (prob.slack_of(lv) < -kTolQ) return;
      } else {
        lv = restore(prob, lv, anchor);
      }
    }
    double v = prob.value_of(lv);
    if (std::isfinite(v) && v > best.value) {
      best.value = v;
      best.levels = std::move(lv);
    }
  };

  // starting points
  std::vector<std::vector<double>> starts;
  const auto& sp = prob.param();
  auto uni = uniform_stack(os).levels;
  uni[0] = pay.arg1;
  for (const auto& w : warm) {
    auto lv = w;
    lv[0] = pay.arg1;
    // blend toward uniform (then anchor) until feasible
    bool done = false;
    for (const auto* target : {&uni, &anchor}) {
      for (int k = 0; k <= 20 && !done; ++k) {
        auto b = blend(lv, *target, k / 20.0);
        if (prob.slack_of(b) >= 0.0) {
          starts.push_back(sp.encode(b));
          done = true;
        }
      }
      if (done) break;
    }
    starts.push_back(sp.encode(lv));
  }
  starts.push_back(sp.encode(anchor));
  for (auto seed : seeds) {
    std::mt19937_64 rng(seed * 7919 + 17);
    std::normal_distribution<double> g(0.0, 1.5);
    std::vector<double> z(sp.size());
    for (auto& v : z) v = g(rng);
    starts.push_back(std::move(z));
  }

  if (vertex_scan) {
    // degenerate stacks on levels 2..d and edge points where N_n = 0 on level d
    std::size_t combos = 1;
    for (int n = 2; n <= d; ++n) combos *= os.count(n);
    if (combos <= 4096) {
      for (std::size_t c = 0; c < combos; ++c) {
        auto lv = uni;
        std::size_t r = c;
        for (int n = 2; n <= d; ++n) {
          int K = os.count(n);
          std::fill(lv[n - 1].begin(), lv[n - 1].end(), 0.0);
          lv[n - 1][r % K] = 1.0;
          r /= K;
        }
        if (prob.slack_of(lv) >= -kTolQ) consider(lv);
        // edges on the top level
        int K = os.count(d);
        int cur = static_cast<int>(std::find(lv[d - 1].begin(), lv[d - 1].end(), 1.0) - lv[d - 1].begin());
        for (int j = 0; j < K; ++j) {
          if (j == cur) continue;
          auto other = lv;
          std::fill(other[d - 1].begin(), other[d - 1].end(), 0.0);
          other[d - 1][j] = 1.0;
          double s0 = prob.slack_of(lv), s1 = prob.slack_of(other);
          if (!(s0 >= 0.0 && s1 < 0.0)) continue;
          double lo = 0.0, hi = 1.0;  // feasible at lo
          for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            (prob.slack_of(blend(lv, other, mid)) >= 0.0 ? lo : hi) = mid;
          }
          consider(blend(lv, other, lo));
        }
      }
    }
  }

  numeric::AugLagOptions ao;
  ao.max_outer = 30;
  ao.inner.max_iter = 300;
  std::vector<numeric::Constraint> cons;
  for (int n = 1; n < d; ++n) cons.push_back({prob.constraint(n), false});
  auto f = prob.objective();
  std::vector<double> best_z;
  double best_raw = -INFINITY;
  for (auto& z0 : starts) {
    consider(prob.decode(z0));
    auto r = numeric::maximize_constrained(f, cons, z0, ao);
    auto lv = prob.decode(r.x);
    consider(lv);
    if (r.violation <= 1e-8 && r.objective > best_raw) {
      best_raw = r.objective;
      best_z = r.x;
    }
  }

  // polish with near-active constraints as equalities
  if (!best_z.empty() && d >= 2) {
    auto lv = prob.decode(best_z);
    CoefficientTape tape(os, lv);
    std::vector<numeric::Constraint> eq;
    bool any = false;
    for (int n = 1; n < d; ++n) {
      bool active = std::fabs(tape.N(n)) < 1e-5;
      any = any || active;
      eq.push_back({prob.constraint(n), active});
    }
    if (any) {
      numeric::AugLagOptions po = ao;
      po.rho0 = 1e3;
      po.inner.grad_tol = 1e-13;
      auto r = numeric::maximize_constrained(f, eq, best_z, po);
      consider(prob.decode(r.x));
    }
  }

  if (best.value == -INFINITY) return out;
  out.feasible = true;
  out.value = best.value;
  out.levels = std::move(best.levels);
  return out;
}

Payoff t_payoff(const OrderingSystem& os, const LevelPotential& phi, const ClosedFormResult& cf) {
  Payoff p;
  p.entropy = true;
  p.lin = phi;
  p.best1 = cf.exponents[0];
  p.arg1 = cf.dominant.levels[0];
  (void)os;
  return p;
}

// sign = +1 for sup S, -1 for sup of -S
Payoff s_payoff(const OrderingSystem& os, const WeightedMeasure& mu, double sign) {
  Payoff p;
  p.entropy = false;
  for (int n = 1; n <= os.dim(); ++n) {
    auto m = project_measure(os, mu, n);
    for (auto& v : m) v = -sign * std::log(v);
    p.lin.push_back(std::move(m));
  }
  // best ratio <lin,p>/chi_1(p) sits on a vertex
  const auto& c = os.loglam[0][0];
  int arg = 0;
  double best = -INFINITY;
  for (int k = 0; k < os.count(1); ++k) {
    double r = p.lin[0][k] / -c[k];
    if (r > best) {
      best = r;
      arg = k;
    }
  }
  p.best1 = best;
  p.arg1.assign(os.count(1), 0.0);
  p.arg1[arg] = 1.0;
  return p;
}

}  // namespace

OrderingPressure sup_over_Q(const OrderingSystem& os, const LevelPotential& phi, const OptimizerOptions& opt) {
  auto cf = solve_closed_form(os, phi);
  OrderingPressure r;
  r.ordering = os.ordering;
  r.upper_bound = cf.exponents.back();
  if (cf.in_Q && !opt.force) {
    r.value = cf.exponents.back();
    r.argmax = cf.dominant;
    r.certified = true;
    r.method = "closed-form";
    return r;
  }
  if (os.dim() == 1) {
    r.value = cf.exponents.back();
    r.argmax = cf.dominant;
    r.certified = true;
    r.method = "closed-form";
    return r;
  }
  auto res = maximize_over_Q(os, t_payoff(os, phi, cf), {cf.dominant.levels}, opt.seeds, false);
  r.method = "optimizer";
  r.certified = false;
  if (!res.feasible) {
    r.feasible = false;
    r.value = -INFINITY;
    r.argmax = cf.dominant;
    return r;
  }
  r.argmax.ordering = os.ordering;
  r.argmax.levels = res.levels;
  // T_d caps the value
  r.value = std::min(res.value, r.upper_bound);
  if (cf.in_Q) r.certified = std::fabs(r.value - r.upper_bound) <= 1e-6;
  return r;
}

OrderingPressure sup_over_Q(const SpongeModel& model, const Permutation& sigma, const PotentialFamily& phi,
                            const OptimizerOptions& opt) {
  if (!model.is_admissible(sigma)) throw DomainError("ordering " + format_ordering(sigma) + " is not admissible");
  return sup_over_Q(model.system(sigma), phi.at(sigma), opt);
}

PressureResult variational_pressure(const SpongeModel& model, const PotentialFamily& phi,
                                    const OptimizerOptions& opt) {
  const auto& A = model.admissible();
  if (A.empty()) throw DomainError("no admissible ordering");
  PressureResult res;
  res.symbolic_only = !model.sppc().satisfied;

  std::vector<ClosedFormResult> cfs;
  double best_certified = -INFINITY;
  for (const auto& sigma : A) {
    cfs.push_back(solve_closed_form(model, sigma, phi));
    if (cfs.back().in_Q) best_certified = std::max(best_certified, cfs.back().exponents.back());
  }
  res.upper_bound = -INFINITY;
  std::size_t top = 0;
  for (std::size_t k = 0; k < A.size(); ++k)
    if (cfs[k].exponents.back() > res.upper_bound) {
      res.upper_bound = cfs[k].exponents.back();
      top = k;
    }

  res.value = -INFINITY;
  for (std::size_t k = 0; k < A.size(); ++k) {
    OrderingPressure op;
    double Td = cfs[k].exponents.back();
    if (!opt.force && !cfs[k].in_Q && Td <= best_certified) {
      // sup over Q <= T_d <= a certified value: cannot be the maximum
      op.ordering = A[k];
      op.value = Td;
      op.upper_bound = Td;
      op.argmax = cfs[k].dominant;
      op.method = "dominated";
      res.per_ordering.push_back(std::move(op));
      continue;
    }
    op = sup_over_Q(model.system(A[k]), phi.at(A[k]), opt);
    if (op.value > res.value) {
      res.value = op.value;
      res.argmax_ordering = A[k];
    }
    res.per_ordering.push_back(std::move(op));
  }
  // ties between orderings resolve toward the certified one
  for (const auto& op : res.per_ordering)
    if (op.method != "dominated" && op.certified && op.value >= res.value - 1e-12) {
      res.argmax_ordering = op.ordering;
      break;
    }
  res.certified = cfs[top].in_Q;
  if (res.certified) {
    res.value = res.upper_bound;
    res.argmax_ordering = A[top];
  }
  return res;
}

PressureResult lq_value(const SpongeModel& model, const WeightedMeasure& mu, double q, const OptimizerOptions& opt) {
  return variational_pressure(model, lq_potential(model, mu, q), opt);
}

SpectrumResult lq_spectrum(const SpongeModel& model, const WeightedMeasure& mu, const std::vector<double>& q_grid,
                           const SpectrumOptions& opt) {
  for (double w : mu.weights)
    if (!(w > 0.0)) throw DomainError("measure weights must be strictly positive");
  SpectrumResult out;
  out.symbolic_only = !model.sppc().satisfied;
  out.points.resize(q_grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < q_grid.size();) {
      out.points[k].q = q_grid[k];
      out.points[k].pressure = lq_value(model, mu, q_grid[k], opt.optimizer);
    }
  };
  int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(q_grid.size())));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          work();
        } catch (...) {
          std::lock_guard<std::mutex> lk(m);
          err = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  return out;
}

PressureResult box_dimension(const SpongeModel& model, const OptimizerOptions& opt) {
  return variational_pressure(model, zero_potential(model), opt);
}

DimensionBounds closed_dimension_bounds(const OrderingSystem& os, const WeightedMeasure& mu) {
  const int d = os.dim();
  DimensionBounds b;
  b.ordering = os.ordering;
  b.K_upper.ordering = b.K_lower.ordering = os.ordering;
  std::vector<double> up(d + 1, 0.0), lo(d + 1, 0.0);
  for (int n = 1; n <= d; ++n) {
    auto m = project_measure(os, mu, n);
    const int K = os.count(n);
    std::vector<double> vu(K), vl(K);
    for (int k = 0; k < K; ++k) {
      double au = std::log(m[k]), al = au;
      for (int l = 1; l < n; ++l) {
        au += (up[l - 1] - up[l]) * os.loglam[n - 1][l - 1][k];
        al += (lo[l - 1] - lo[l]) * os.loglam[n - 1][l - 1][k];
      }
      vu[k] = au / os.loglam[n - 1][n - 1][k];
      vl[k] = al / os.loglam[n - 1][n - 1][k];
    }
    double mx = *std::max_element(vu.begin(), vu.end());
    double mn = *std::min_element(vl.begin(), vl.end());
    up[n] = up[n - 1] + mx;
    lo[n] = lo[n - 1] + mn;
    std::vector<int> am, an;
    for (int k = 0; k < K; ++k) {
      if (vu[k] >= mx - 1e-12 * (1.0 + std::fabs(mx))) am.push_back(os.level(n).indices[k]);
      if (vl[k] <= mn + 1e-12 * (1.0 + std::fabs(mn))) an.push_back(os.level(n).indices[k]);
    }
    std::vector<double> eu(K, 0.0), el(K, 0.0);
    eu[os.level(n).position[am[0]]] = 1.0;
    el[os.level(n).position[an[0]]] = 1.0;
    b.K_upper.levels.push_back(std::move(eu));
    b.K_lower.levels.push_back(std::move(el));
    b.argmax.push_back(std::move(am));
    b.argmin.push_back(std::move(an));
  }
  b.upper.assign(up.begin() + 1, up.end());
  b.lower.assign(lo.begin() + 1, lo.end());
  return b;
}

namespace {

// Search tie combinations of the degenerate extremizers for one inside Q.
bool extremizer_in_Q(const OrderingSystem& os, const std::vector<std::vector<int>>& ties, ProbStack& out) {
  const int d = os.dim();
  std::size_t combos = 1;
  for (const auto& t : ties) combos *= t.size();
  combos = std::min<std::size_t>(combos, 4096);
  for (std::size_t c = 0; c < combos; ++c) {
    ProbStack P;
    P.ordering = os.ordering;
    std::size_t r = c;
    for (int n = 1; n <= d; ++n) {
      const auto& t = ties[n - 1];
      std::vector<double> v(os.count(n), 0.0);
      v[os.level(n).position[t[r % t.size()]]] = 1.0;
      r /= t.size();
      P.levels.push_back(std::move(v));
    }
    if (in_Q(os, P)) {
      out = std::move(P);
      return true;
    }
  }
  return false;
}

}  // namespace

double entropy_dimension_proxy(const SpongeModel& model, const WeightedMeasure& mu, const OptimizerOptions& opt) {
  auto at = [&](double q) { return lq_value(model, mu, q, opt); };
  double h = 1e-5;
  auto a = at(1.0 + h), b = at(1.0 - h);
  if (!(a.certified && b.certified)) {
    h = 1e-3;
    a = at(1.0 + h);
    b = at(1.0 - h);
  }
  return -(a.value - b.value) / (2.0 * h);
}

DimensionResult measure_dimensions(const SpongeModel& model, const WeightedMeasure& mu, const OptimizerOptions& opt) {
  if (static_cast<int>(mu.weights.size()) != model.size())
    throw DomainError("measure length does not match the map count");
  DimensionResult res;
  res.symbolic_only = !model.sppc().satisfied;
  double fro = INFINITY, box = -INFINITY, min_lower = INFINITY, max_upper = -INFINITY;
  bool all_cert = true;
  for (const auto& sigma : model.admissible()) {
    const auto& os = model.system(sigma);
    OrderingDimension od;
    od.ordering = sigma;
    od.bounds = closed_dimension_bounds(os, mu);
    min_lower = std::min(min_lower, od.bounds.lower.back());
    max_upper = std::max(max_upper, od.bounds.upper.back());

    ProbStack P;
    if (!opt.force && extremizer_in_Q(os, od.bounds.argmax, P)) {
      od.sup_S = od.bounds.upper.back();
      od.sup_argmax = P;
      od.sup_certified = true;
    } else {
      auto r = maximize_over_Q(os, s_payoff(os, mu, +1.0), {od.bounds.K_upper.levels}, opt.seeds, true);
      od.feasible = r.feasible;
      od.sup_S = r.feasible ? std::min(r.value, od.bounds.upper.back()) : -INFINITY;
      od.sup_argmax = {sigma, r.levels};
    }
    if (!opt.force && extremizer_in_Q(os, od.bounds.argmin, P)) {
      od.inf_S = od.bounds.lower.back();
      od.inf_argmin = P;
      od.inf_certified = true;
    } else {
      auto r = maximize_over_Q(os, s_payoff(os, mu, -1.0), {od.bounds.K_lower.levels}, opt.seeds, true);
      od.feasible = od.feasible && r.feasible;
      od.inf_S = r.feasible ? std::max(-r.value, od.bounds.lower.back()) : INFINITY;
      od.inf_argmin = {sigma, r.levels};
    }
    if (od.feasible) {
      fro = std::min(fro, od.inf_S);
      box = std::max(box, od.sup_S);
    }
    all_cert = all_cert && od.sup_certified && od.inf_certified;
    res.per_ordering.push_back(std::move(od));
  }
  res.frostman_raw = fro;
  res.frostman = std::max(0.0, fro);
  res.box_of_measure = box;
  res.closed_lower_frostman = std::max(0.0, min_lower);
  res.closed_upper_box = max_upper;
  res.certified = all_cert;

  const double qa = 200.0;
  auto plus = lq_value(model, mu, qa, opt);
  auto minus = lq_value(model, mu, -qa, opt);
  res.asymptote_plus = plus.value / -qa;
  res.asymptote_minus = minus.value / qa;
  res.asymptote_bound = model.dim() * std::log(static_cast<double>(model.size())) /
                        (-std::log(model.ifs().lambda_min()) * qa);
  res.asymptote_consistent = std::fabs(res.asymptote_plus - res.frostman) <= res.asymptote_bound &&
                             std::fabs(res.asymptote_minus - res.box_of_measure) <= res.asymptote_bound;
  res.entropy_dimension_proxy = entropy_dimension_proxy(model, mu, opt);
  return res;
}

}  // namespace sponge
