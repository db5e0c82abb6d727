#include "sponge/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sponge/error.hpp"

namespace sponge::numeric {

double log_sum_exp(std::span<const double> xs) {
  LogSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

void LogSum::add(double x) {
  if (x == kNegInf) return;
  if (x <= max_) {
    sum_ += std::exp(x - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

void LogSum::merge(const LogSum& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  if (other.max_ <= max_) {
    sum_ += other.sum_ * std::exp(other.max_ - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - other.max_) + other.sum_;
    max_ = other.max_;
  }
}

double LogSum::value() const { return empty() ? kNegInf : max_ + std::log(sum_); }

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

RootResult solve_decreasing(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double tol) {
  RootResult r;
  double lo = -1.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  // grow until f(lo) > 0 > f(hi)
  while (!(flo >= 0.0 && fhi <= 0.0)) {
    if (flo < 0.0) {
      hi = lo;
      fhi = flo;
      lo *= 2.0;
      flo = f(lo);
    } else {
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      fhi = f(hi);
    }
    if (++r.iterations > 2000 || !std::isfinite(lo) || !std::isfinite(hi))
      throw DomainError("root bracket did not close");
  }
  if (flo == 0.0) return {lo, 0.0, r.iterations};
  if (fhi == 0.0) return {hi, 0.0, r.iterations};

  // bisection to a modest width, then Newton
  while (hi - lo > 1e-6 * std::max(1.0, std::fabs(lo) + std::fabs(hi))) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    ++r.iterations;
    if (fm == 0.0) return {mid, 0.0, r.iterations};
    (fm > 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int k = 0; k < 200 && std::fabs(fx) > tol; ++k) {
    ++r.iterations;
    (fx > 0.0 ? lo : hi) = x;
    if (!(lo < hi)) break;
    double d = df(x);
    double nx = (d < 0.0 && std::isfinite(d)) ? x - fx / d : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (nx == x) break;
    x = nx;
    fx = f(x);
  }
  r.x = x;
  r.residual = fx;
  return r;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace

MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x, const BfgsOptions& opt) {
  const std::size_t n = x.size();
  MinimizeResult res;
  std::vector<double> g(n), gn(n), xn(n), dir(n), s(n), y(n), Hy(n);
  double fx = f(x, g);
  if (n == 0) {
    res.x = x;
    res.value = fx;
    res.converged = true;
    return res;
  }
  std::vector<double> H(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  bool scaled = false;

  for (int it = 0; it < opt.max_iter; ++it) {
    res.iterations = it + 1;
    if (!std::isfinite(fx)) break;
    if (inf_norm(g) <= opt.grad_tol * (1.0 + std::fabs(fx))) {
      res.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc -= H[i * n + j] * g[j];
      dir[i] = acc;
    }
    double slope = dot(dir, g);
    if (!(slope < 0.0)) {
      // lost descent; reset to steepest
      std::fill(H.begin(), H.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        H[i * n + i] = 1.0;
        dir[i] = -g[i];
      }
      slope = -dot(g, g);
    }
    double t = 1.0;
    // keep trial steps bounded in parameter space
    double dn = inf_norm(dir);
    if (dn > 10.0) t = 10.0 / dn;
    double fn = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * dir[i];
      fn = f(xn, gn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.converged = inf_norm(g) <= 1e-6 * (1.0 + std::fabs(fx));
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    double sy = dot(s, y);
    double fprev = fx;
    x.swap(xn);
    g.swap(gn);
    fx = fn;
    if (inf_norm(s) <= opt.step_tol * (1.0 + inf_norm(x)) && fprev - fx <= 1e-16 * (1.0 + std::fabs(fx))) {
      res.converged = true;
      break;
    }
    if (sy > 1e-300) {
      if (!scaled) {
        double scale = sy / dot(y, y);
        for (auto& h : H) h *= scale;
        scaled = true;
      }
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += H[i * n + j] * y[j];
        Hy[i] = acc;
      }
      double yHy = dot(y, Hy);
      double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i * n + j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] - s[i] * Hy[j]);
    }
  }
  res.x = std::move(x);
  res.value = fx;
  return res;
}

AugLagResult maximize_constrained(const Objective& f, const std::vector<Constraint>& cons,
                                  std::vector<double> x, const AugLagOptions& opt) {
  const std::size_t m = cons.size();
  const std::size_t n = x.size();
  std::vector<double> lam(m, 0.0), gv(m);
  double rho = opt.rho0;
  std::vector<double> tmp(n);

  auto violation_at = [&](std::span<const double> xx) {
    double v = 0.0;
    std::vector<double> gg(n);
    for (std::size_t k = 0; k < m; ++k) {
      double c = cons[k].g(xx, gg);
      v = std::max(v, cons[k].equality ? std::fabs(c) : std::max(0.0, -c));
    }
    return v;
  };

  double prev_v = violation_at(x);
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    Objective L = [&](std::span<const double> xx, std::span<double> grad) {
      double val = -f(xx, grad);
      for (auto& v : grad) v = -v;
      for (std::size_t k = 0; k < m; ++k) {
        double c = cons[k].g(xx, tmp);
        double w;
        if (cons[k].equality) {
          val += -lam[k] * c + 0.5 * rho * c * c;
          w = -lam[k] + rho * c;
        } else {
          double a = std::max(0.0, lam[k] - rho * c);
          val += (a * a - lam[k] * lam[k]) / (2.0 * rho);
          w = -a;
        }
        if (w != 0.0)
          for (std::size_t i = 0; i < n; ++i) grad[i] += w * tmp[i];
      }
      return val;
    };
    auto inner = minimize_bfgs(L, x, opt.inner);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::fabs(inner.x[i] - x[i]));
    x = inner.x;

    double v = 0.0, dlam = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      double c = cons[k].g(x, tmp);
      gv[k] = c;
      double nl;
      if (cons[k].equality) {
        nl = lam[k] - rho * c;
        v = std::max(v, std::fabs(c));
      } else {
        nl = std::max(0.0, lam[k] - rho * c);
        v = std::max(v, std::max(0.0, -c));
      }
      dlam = std::max(dlam, std::fabs(nl - lam[k]));
      lam[k] = nl;
    }
    if (v <= opt.feas_tol && (dlam <= 1e-10 * (1.0 + inf_norm(lam)) || moved <= 1e-13)) break;
    if (v > 0.25 * prev_v) rho = std::min(rho * 10.0, 1e12);
    prev_v = v;
  }
  AugLagResult out;
  std::vector<double> gg(n);
  out.objective = f(x, gg);
  out.violation = violation_at(x);
  out.x = std::move(x);
  out.multipliers = std::move(lam);
  return out;
}

void softmax_pinned(std::span<const double> z, std::span<double> p) {
  double mx = 0.0;
  for (double v : z) mx = std::max(mx, v);
  double s = std::exp(-mx);
  p[0] = s;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i + 1] = std::exp(z[i] - mx);
    s += p[i + 1];
  }
  for (auto& v : p) v /= s;
}

void softmax_pinned_grad(std::span<const double> p, std::span<const double> dp,
                         std::span<double> dz) {
  double avg = dot(p, dp);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) dz[i] = p[i + 1] * (dp[i + 1] - avg);
}

std::vector<std::uint64_t> default_seeds() {
  std::uint64_t base = 0;
  if (const char* env = std::getenv("SPONGE_SPECTRA_SEED")) {
    try {
      base = std::stoull(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("SPONGE_SPECTRA_SEED is not an integer: ") + env);
    }
  }
  std::vector<std::uint64_t> seeds(32);
  for (std::uint64_t k = 0; k < 32; ++k) seeds[k] = base + k;
  return seeds;
}

}  // namespace sponge::numeric
