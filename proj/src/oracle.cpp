#include "sponge/oracle.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "sponge/error.hpp"
#include "sponge/pressure.hpp"

namespace sponge {

double estimate_cube_count(const SpongeIFS& ifs, double delta) {
  ScaleThreshold th(delta);
  const int d = ifs.dim();
  double top = 0.0;
  for (const auto& sigma : all_permutations(d)) {
    auto os = build_ordering_system(ifs, sigma);
    LevelPotential zero;
    for (int n = 1; n <= d; ++n) zero.emplace_back(os.count(n), 0.0);
    top = std::max(top, solve_closed_form(os, zero).exponents.back());
  }
  return std::exp(-top * std::log(delta) - d * std::log(ifs.lambda_min()));
}

namespace {

class Enumerator {
 public:
  Enumerator(const SpongeIFS& ifs, double delta, const std::function<void(const ApproximateCube&)>& visit,
             std::uint64_t budget, double bound)
      : ifs_(ifs), th_(delta), visit_(visit), budget_(budget), bound_(bound), d_(ifs.dim()) {
    const unsigned full = (1u << d_) - 1;
    classes_.resize(full + 1);
    for (unsigned R = 1; R <= full; ++R) {
      std::map<std::vector<int>, int> first;
      for (int j = 0; j < ifs.size(); ++j) {
        std::vector<int> key;
        for (int c = 0; c < d_; ++c)
          if (R >> c & 1u) key.push_back(ifs.coord_class(j, c));
        if (first.emplace(std::move(key), j).second) classes_[R].push_back(j);
      }
    }
    for (const auto& sigma : all_permutations(d_)) systems_.emplace(sigma, build_ordering_system(ifs, sigma));
    lp_.assign(d_, 0.0L);
    L_.assign(d_, 0);
  }

  std::uint64_t run() {
    dfs((1u << d_) - 1);
    return count_;
  }

 private:
  void dfs(unsigned R) {
    const int pos = static_cast<int>(word_.size());
    for (int rep : classes_[R]) {
      word_.push_back(rep);
      unsigned stopped = 0;
      for (int c = 0; c < d_; ++c) {
        if (!(R >> c & 1u)) continue;
        lp_[c] += ifs_.log_lambda(rep, c);
        if (th_.reached(ifs_, c, lp_[c], word_)) {
          stopped |= 1u << c;
          L_[c] = pos + 1;
        }
      }
      unsigned next = R & ~stopped;
      if (next == 0)
        emit();
      else
        dfs(next);
      for (int c = 0; c < d_; ++c)
        if (R >> c & 1u) lp_[c] -= ifs_.log_lambda(rep, c);
      word_.pop_back();
    }
  }

  void emit() {
    if (++count_ > budget_)
      throw BudgetExceeded("cube enumeration passed the budget of " + std::to_string(budget_) + " cubes",
                           bound_);
    ApproximateCube cube;
    cube.stoppings = L_;
    cube.ordering = ordering_from_stoppings(L_);
    const auto& os = systems_.at(cube.ordering);
    cube.blocks.resize(d_);
    cube.slots.resize(d_);
    for (int n = 1; n <= d_; ++n) {
      int hi = L_[cube.ordering[n - 1]];
      int lo = n < d_ ? L_[cube.ordering[n]] : 0;
      const auto& lv = os.level(n);
      for (int p = lo; p < hi; ++p) {
        int rep = word_[p];
        int slot = lv.position[rep];
        if (slot < 0) throw Error("internal: symbol outside its projected index set");
        cube.blocks[n - 1].push_back(rep);
        cube.slots[n - 1].push_back(slot);
      }
    }
    cube.log_sides.resize(d_);
    for (int c = 0; c < d_; ++c) cube.log_sides[c] = static_cast<double>(lp_side(c));
    visit_(cube);
  }

  long double lp_side(int c) const {
    long double s = 0.0L;
    for (int p = 0; p < L_[c]; ++p) s += ifs_.log_lambda(word_[p], c);
    return s;
  }

  const SpongeIFS& ifs_;
  ScaleThreshold th_;
  const std::function<void(const ApproximateCube&)>& visit_;
  std::uint64_t budget_, count_ = 0;
  double bound_;
  int d_;
  std::vector<std::vector<int>> classes_;  // by coordinate mask
  std::map<Permutation, OrderingSystem> systems_;
  std::vector<int> word_;
  std::vector<long double> lp_;
  std::vector<int> L_;
};

}  // namespace

std::uint64_t enumerate_cubes(const SpongeIFS& ifs, double delta,
                              const std::function<void(const ApproximateCube&)>& visit, const OracleOptions& opt) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  if (ifs.dim() > 16) throw DomainError("dimension too large for enumeration");
  double bound = estimate_cube_count(ifs, delta);
  if (bound > static_cast<double>(opt.budget))
    throw BudgetExceeded("estimated " + std::to_string(static_cast<long double>(bound)) +
                             " cubes exceeds the budget of " + std::to_string(opt.budget),
                         bound);
  Enumerator e(ifs, delta, visit, opt.budget, bound);
  return e.run();
}

std::vector<ApproximateCube> collect_cubes(const SpongeIFS& ifs, double delta, const OracleOptions& opt) {
  std::vector<ApproximateCube> out;
  enumerate_cubes(ifs, delta, [&](const ApproximateCube& c) { out.push_back(c); }, opt);
  return out;
}

namespace {

FiniteScalePressure run_pressure(const SpongeModel& model, double delta, const OracleOptions& opt,
                                 const std::function<double(const ApproximateCube&)>& Phi) {
  auto t0 = std::chrono::steady_clock::now();
  std::map<Permutation, numeric::LogSum> sums;
  FiniteScalePressure r;
  r.delta = delta;
  r.cube_count = enumerate_cubes(
      model.ifs(), delta,
      [&](const ApproximateCube& c) {
        sums[c.ordering].add(Phi(c));
        ++r.count_by_ordering[c.ordering];
      },
      opt);
  numeric::LogSum total;
  for (const auto& [sigma, s] : sums) {
    r.log_Z_by_ordering[sigma] = s.value();
    total.merge(s);
  }
  r.log_Z = total.value();
  r.estimate = r.log_Z / -std::log(delta);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

FiniteScalePressure finite_scale_pressure(const SpongeModel& model, const PotentialFamily& phi, double delta,
                                          const OracleOptions& opt) {
  return run_pressure(model, delta, opt, [&](const ApproximateCube& c) {
    if (!phi.table.count(c.ordering))
      throw Error("ordering " + format_ordering(c.ordering) + " occurs at this scale but has no potential");
    return phi_value(c, phi);
  });
}

FiniteScalePressure finite_scale_lq(const SpongeModel& model, const WeightedMeasure& mu, double q, double delta,
                                    const OracleOptions& opt) {
  std::map<Permutation, std::vector<std::vector<double>>> logmu;
  for (const auto& sigma : all_permutations(model.dim())) {
    const auto& os = model.system(sigma);
    auto& t = logmu[sigma];
    for (int n = 1; n <= os.dim(); ++n) {
      auto m = project_measure(os, mu, n);
      for (auto& v : m) v = std::log(v);
      t.push_back(std::move(m));
    }
  }
  return run_pressure(model, delta, opt, [&](const ApproximateCube& c) {
    const auto& t = logmu.at(c.ordering);
    double s = 0.0;
    for (std::size_t n = 0; n < c.slots.size(); ++n)
      for (int k : c.slots[n]) s += t[n][k];
    return q * s;
  });
}

std::vector<std::vector<double>> TypeVector::frequencies() const {
  std::vector<std::vector<double>> f;
  for (std::size_t n = 0; n < counts.size(); ++n) {
    std::vector<double> v(counts[n].size(), 0.0);
    if (lengths[n] > 0)
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(counts[n][k]) / lengths[n];
    f.push_back(std::move(v));
  }
  return f;
}

std::vector<double> type_coefficients(const OrderingSystem& os, const TypeVector& t) {
  const int d = os.dim();
  auto f = t.frequencies();
  std::vector<double> C(d, 0.0);
  for (int n = d; n >= 1; --n) {
    double N = 1.0;
    for (int m = n + 1; m <= d; ++m) N -= C[m - 1] * lyapunov(os, f[m - 1], m, n);
    if (t.lengths[n - 1] == 0) continue;
    C[n - 1] = N / lyapunov(os, f[n - 1], n, n);
  }
  return C;
}

TypeCensus type_census(const SpongeModel& model, double delta, const Permutation& sigma, const OracleOptions& opt) {
  if (!is_permutation_of(sigma, model.dim())) throw DomainError("ordering is not a permutation");
  const auto& os = model.system(sigma);
  const int d = model.dim();
  std::map<TypeVector, std::uint64_t> counts;
  TypeCensus out;
  out.ordering = sigma;
  out.delta = delta;
  enumerate_cubes(
      model.ifs(), delta,
      [&](const ApproximateCube& c) {
        if (c.ordering != sigma) return;
        TypeVector t;
        t.ordering = sigma;
        for (int n = 1; n <= d; ++n) {
          std::vector<int> v(os.count(n), 0);
          for (int k : c.slots[n - 1]) ++v[k];
          t.counts.push_back(std::move(v));
          t.lengths.push_back(c.block_length(n));
        }
        ++counts[t];
        ++out.cube_count;
      },
      opt);

  const double logdelta = std::log(delta);
  const double eps = std::log(model.ifs().lambda_min()) / logdelta;
  std::vector<int> max_len(d, 0);
  for (const auto& [t, cnt] : counts) {
    TypeCheck tc;
    tc.type = t;
    tc.count = cnt;
    double H = 0.0, pen = 0.0;
    auto f = t.frequencies();
    for (int n = 1; n <= d; ++n) {
      H += t.lengths[n - 1] * numeric::entropy(f[n - 1]);
      pen += os.count(n) * std::log(t.lengths[n - 1] + 1.0);
      max_len[n - 1] = std::max(max_len[n - 1], t.lengths[n - 1]);
    }
    tc.log_upper = H;
    tc.log_lower = H - pen;
    double lc = std::log(static_cast<double>(cnt));
    const double slack = 1e-9 * (1.0 + std::fabs(H));
    tc.class_bounds_ok = lc <= tc.log_upper + slack && lc >= tc.log_lower - slack;
    tc.C = type_coefficients(os, t);
    tc.stopping_sandwich_ok = true;
    for (int n = 1; n <= d; ++n) {
      double lo = -tc.C[n - 1] * logdelta, hi = (1.0 + eps) * lo, len = t.lengths[n - 1];
      double tol = 1e-9 * (1.0 + len);
      if (len < lo - tol || len > hi + tol) tc.stopping_sandwich_ok = false;
    }
    out.class_bounds_ok = out.class_bounds_ok && tc.class_bounds_ok;
    out.stopping_sandwich_ok = out.stopping_sandwich_ok && tc.stopping_sandwich_ok;
    out.types.push_back(std::move(tc));
  }
  out.log_type_bound = 0.0;
  for (int n = 1; n <= d; ++n) out.log_type_bound += (os.count(n) + 1) * std::log(max_len[n - 1] + 1.0);
  out.type_count_ok = std::log(static_cast<double>(std::max<std::size_t>(1, counts.size()))) <=
                      out.log_type_bound + 1e-12;
  return out;
}

MeasureExtremes finite_scale_measure_extremes(const SpongeModel& model, const WeightedMeasure& mu, double delta,
                                              const OracleOptions& opt) {
  std::map<Permutation, std::vector<std::vector<double>>> logmu;
  for (const auto& sigma : all_permutations(model.dim())) {
    const auto& os = model.system(sigma);
    auto& t = logmu[sigma];
    for (int n = 1; n <= os.dim(); ++n) {
      auto m = project_measure(os, mu, n);
      for (auto& v : m) v = std::log(v);
      t.push_back(std::move(m));
    }
  }
  MeasureExtremes r;
  r.max_log = -INFINITY;
  r.min_log = INFINITY;
  std::map<Permutation, std::pair<double, double>> ext;  // (max_log, min_log)
  const double logdelta = std::log(delta);
  r.cube_count = enumerate_cubes(
      model.ifs(), delta,
      [&](const ApproximateCube& c) {
        const auto& t = logmu.at(c.ordering);
        double s = 0.0;
        for (std::size_t n = 0; n < c.slots.size(); ++n)
          for (int k : c.slots[n]) s += t[n][k];
        r.max_log = std::max(r.max_log, s);
        r.min_log = std::min(r.min_log, s);
        auto [it, fresh] = ext.try_emplace(c.ordering, s, s);
        if (!fresh) {
          it->second.first = std::max(it->second.first, s);
          it->second.second = std::min(it->second.second, s);
        }
      },
      opt);
  r.min_exponent = r.max_log / logdelta;
  r.max_exponent = r.min_log / logdelta;
  for (const auto& [sigma, e] : ext) r.by_ordering[sigma] = {e.first / logdelta, e.second / logdelta};
  return r;
}

}  // namespace sponge
