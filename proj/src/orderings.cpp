#include "sponge/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sponge/error.hpp"

namespace sponge {

int PeriodicWord::at(std::size_t k) const {
  if (k < preperiod.size()) return preperiod[k];
  return period[(k - preperiod.size()) % period.size()];
}

ScaleThreshold::ScaleThreshold(double delta)
    : delta_(delta), log_delta_(std::log(static_cast<long double>(delta))) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
  exact_ = rational_from_double(delta);
}

bool ScaleThreshold::reached(const SpongeIFS& ifs, int coord, long double log_prod,
                             std::span<const int> symbols) const {
  long double window = 1e-9L * std::max<long double>(1.0L, std::fabs(log_delta_));
  if (log_prod < log_delta_ - window) return true;
  if (log_prod > log_delta_ + window) return false;
  Rational prod = 1;
  for (int s : symbols) prod *= ifs.ratio(s, coord);
  return prod <= exact_;
}

namespace {

void check_word(const SpongeIFS& ifs, const PeriodicWord& w) {
  if (w.period.empty()) throw DomainError("periodic word needs a non-empty period");
  for (const auto* v : {&w.preperiod, &w.period})
    for (int s : *v)
      if (s < 0 || s >= ifs.size()) throw DomainError("word symbol out of range");
}

}  // namespace

std::vector<int> stoppings(const SpongeIFS& ifs, const PeriodicWord& word, double delta) {
  check_word(ifs, word);
  ScaleThreshold th(delta);
  const int d = ifs.dim();
  std::vector<int> L(d, 0);
  std::vector<long double> lp(d, 0.0L);
  std::vector<int> symbols;
  int open = d;
  for (std::size_t k = 0; open > 0; ++k) {
    int s = word.at(k);
    symbols.push_back(s);
    for (int c = 0; c < d; ++c) {
      if (L[c]) continue;
      lp[c] += ifs.log_lambda(s, c);
      if (th.reached(ifs, c, lp[c], symbols)) {
        L[c] = static_cast<int>(k + 1);
        --open;
      }
    }
  }
  return L;
}

int stopping(const SpongeIFS& ifs, const PeriodicWord& word, double delta, int coord) {
  if (coord < 0 || coord >= ifs.dim()) throw DomainError("coordinate out of range");
  return stoppings(ifs, word, delta)[coord];
}

Permutation ordering_from_stoppings(const std::vector<int>& L) {
  Permutation p = identity_permutation(static_cast<int>(L.size()));
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return L[a] > L[b]; });
  return p;
}

Permutation scale_ordering(const SpongeIFS& ifs, const PeriodicWord& word, double delta) {
  return ordering_from_stoppings(stoppings(ifs, word, delta));
}

ProbStack uniform_stack(const OrderingSystem& os) {
  ProbStack P;
  P.ordering = os.ordering;
  for (int n = 1; n <= os.dim(); ++n) P.levels.emplace_back(os.count(n), 1.0 / os.count(n));
  return P;
}

ProbStack projected_stack(const OrderingSystem& os, std::span<const double> p_full) {
  ProbStack P;
  P.ordering = os.ordering;
  for (int n = 1; n <= os.dim(); ++n) {
    const auto& lv = os.level(n);
    std::vector<double> v(lv.count(), 0.0);
    for (std::size_t j = 0; j < p_full.size(); ++j) v[lv.slot_of(static_cast<int>(j))] += p_full[j];
    P.levels.push_back(std::move(v));
  }
  return P;
}

void check_stack(const OrderingSystem& os, const ProbStack& P) {
  if (P.ordering != os.ordering) throw DomainError("stack ordering does not match the system");
  if (static_cast<int>(P.levels.size()) != os.dim()) throw DomainError("stack needs one vector per level");
  for (int n = 1; n <= os.dim(); ++n) {
    const auto& v = P.levels[n - 1];
    if (static_cast<int>(v.size()) != os.count(n)) throw DomainError("level vector has the wrong length");
    double s = 0.0;
    for (double x : v) {
      if (!(x >= 0.0)) throw DomainError("negative probability");
      s += x;
    }
    if (std::fabs(s - 1.0) > 1e-12) throw DomainError("level vector does not sum to 1");
  }
}

double lyapunov(const OrderingSystem& os, std::span<const double> p, int m, int n) {
  if (m < 1 || m > os.dim() || n < 1 || n > m) throw DomainError("lyapunov: need 1 <= n <= m <= d");
  const auto& row = os.loglam[m - 1][n - 1];
  if (p.size() != row.size()) throw DomainError("lyapunov: vector length does not match I_m");
  double s = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) s -= p[k] * row[k];
  return s;
}

double Coefficients::min() const { return *std::min_element(values.begin(), values.end()); }

CoefficientTape::CoefficientTape(const OrderingSystem& os,
                                 const std::vector<std::vector<double>>& levels)
    : os_(&os), d_(os.dim()) {
  chi_.resize(d_);
  for (int m = 1; m <= d_; ++m) {
    chi_[m - 1].resize(m);
    for (int l = 1; l <= m; ++l) {
      const auto& row = os.loglam[m - 1][l - 1];
      const auto& p = levels[m - 1];
      double s = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) s -= p[k] * row[k];
      chi_[m - 1][l - 1] = s;
    }
  }
  C_.assign(d_, 0.0);
  N_.assign(d_, 1.0);
  for (int n = d_; n >= 1; --n) {
    double N = 1.0;
    for (int m = n + 1; m <= d_; ++m) N -= C_[m - 1] * chi(n, m);
    N_[n - 1] = N;
    C_[n - 1] = N / chi(n, n);
  }
}

void CoefficientTape::backprop(std::span<const double> wC, std::span<const double> wN,
                               std::vector<std::vector<double>>& grads) const {
  std::vector<double> cbar(wC.begin(), wC.end()), nbar(wN.begin(), wN.end());
  // chibar[m-1][l-1]
  std::vector<std::vector<double>> chibar(d_);
  for (int m = 1; m <= d_; ++m) chibar[m - 1].assign(m, 0.0);
  for (int n = 1; n <= d_; ++n) {
    double x = chi(n, n);
    nbar[n - 1] += cbar[n - 1] / x;
    chibar[n - 1][n - 1] -= cbar[n - 1] * C_[n - 1] / x;
    for (int m = n + 1; m <= d_; ++m) {
      cbar[m - 1] -= nbar[n - 1] * chi(n, m);
      chibar[m - 1][n - 1] -= nbar[n - 1] * C_[m - 1];
    }
  }
  for (int m = 1; m <= d_; ++m) {
    auto& g = grads[m - 1];
    for (int l = 1; l <= m; ++l) {
      double w = chibar[m - 1][l - 1];
      if (w == 0.0) continue;
      const auto& row = os_->loglam[m - 1][l - 1];
      for (std::size_t k = 0; k < row.size(); ++k) g[k] -= w * row[k];
    }
  }
}

Coefficients coefficients(const OrderingSystem& os, const ProbStack& P) {
  check_stack(os, P);
  CoefficientTape tape(os, P.levels);
  Coefficients c;
  for (int n = 1; n <= os.dim(); ++n) c.values.push_back(tape.C(n));
  return c;
}

bool in_Q(const OrderingSystem& os, const ProbStack& P) { return coefficients(os, P).min() >= -kTolQ; }

StackParametrization::StackParametrization(const OrderingSystem& os, int first_level)
    : os_(&os), first_(first_level) {
  offset_.assign(os.dim(), 0);
  for (int n = first_; n <= os.dim(); ++n) {
    offset_[n - 1] = total_;
    total_ += os.count(n) - 1;
  }
}

void StackParametrization::decode(std::span<const double> z,
                                  std::vector<std::vector<double>>& levels) const {
  for (int n = first_; n <= os_->dim(); ++n) {
    int k = os_->count(n);
    levels[n - 1].resize(k);
    numeric::softmax_pinned(z.subspan(offset_[n - 1], k - 1), levels[n - 1]);
  }
}

std::vector<double> StackParametrization::encode(const std::vector<std::vector<double>>& levels) const {
  std::vector<double> z(total_);
  for (int n = first_; n <= os_->dim(); ++n) {
    const auto& p = levels[n - 1];
    double l0 = std::log(std::max(p[0], 1e-300));
    for (std::size_t k = 1; k < p.size(); ++k)
      z[offset_[n - 1] + k - 1] = std::clamp(std::log(std::max(p[k], 1e-300)) - l0, -60.0, 60.0);
  }
  return z;
}

void StackParametrization::chain(const std::vector<std::vector<double>>& levels,
                                 const std::vector<std::vector<double>>& grads,
                                 std::span<double> dz) const {
  for (int n = first_; n <= os_->dim(); ++n) {
    int k = os_->count(n);
    numeric::softmax_pinned_grad(levels[n - 1], grads[n - 1], dz.subspan(offset_[n - 1], k - 1));
  }
}

std::string to_string(OrderingStatus s) {
  switch (s) {
    case OrderingStatus::CertifiedIn: return "certified-in";
    case OrderingStatus::CertifiedOut: return "certified-out";
    case OrderingStatus::HeuristicOut: return "heuristic-out";
  }
  return "?";
}

std::vector<Permutation> AdmissibleOrderings::admissible() const {
  std::vector<Permutation> out;
  for (const auto& v : verdicts)
    if (v.status == OrderingStatus::CertifiedIn) out.push_back(v.ordering);
  return out;
}

const OrderingVerdict* AdmissibleOrderings::find(const Permutation& sigma) const {
  for (const auto& v : verdicts)
    if (v.ordering == sigma) return &v;
  return nullptr;
}

bool forced_ordering(const SpongeIFS& ifs, Permutation& out) {
  const int d = ifs.dim(), N = ifs.size();
  std::vector<Permutation> hits;
  for (const auto& sigma : all_permutations(d)) {
    bool ok = true;
    for (int k = 0; k + 1 < d && ok; ++k) {
      int a = sigma[k], b = sigma[k + 1];
      bool strict_all = true;
      for (int i = 0; i < N; ++i) {
        if (ifs.ratio(i, a) < ifs.ratio(i, b)) ok = false;
        if (!(ifs.ratio(i, a) > ifs.ratio(i, b))) strict_all = false;
      }
      // a tie in stoppings puts the smaller index first
      if (ok && !strict_all && a > b) ok = false;
    }
    if (ok) hits.push_back(sigma);
  }
  if (hits.size() != 1) return false;
  out = hits[0];
  return true;
}

FeasibleStack max_min_slack(const OrderingSystem& os, const std::vector<std::uint64_t>& seeds,
                            const std::vector<std::vector<double>>& extra_starts) {
  const int d = os.dim();
  FeasibleStack out{INFINITY, uniform_stack(os)};
  if (d == 1) return out;
  StackParametrization sp(os, 2);
  std::vector<std::vector<double>> levels = uniform_stack(os).levels;
  std::vector<std::vector<double>> grads(d);
  std::vector<double> wC(d, 0.0), wN(d, 0.0);
  const double beta = 200.0;

  auto true_min = [&](std::span<const double> z) {
    sp.decode(z, levels);
    CoefficientTape tape(os, levels);
    double m = INFINITY;
    for (int n = 1; n < d; ++n) m = std::min(m, tape.N(n));
    return m;
  };
  numeric::Objective neg_softmin = [&](std::span<const double> z, std::span<double> gz) {
    sp.decode(z, levels);
    CoefficientTape tape(os, levels);
    double mn = INFINITY;
    for (int n = 1; n < d; ++n) mn = std::min(mn, tape.N(n));
    double s = 0.0;
    for (int n = 1; n < d; ++n) s += std::exp(-beta * (tape.N(n) - mn));
    double softmin = mn - std::log(s) / beta;
    std::fill(wC.begin(), wC.end(), 0.0);
    for (int n = 1; n <= d; ++n) wN[n - 1] = n < d ? -std::exp(-beta * (tape.N(n) - mn)) / s : 0.0;
    for (int m = 1; m <= d; ++m) grads[m - 1].assign(levels[m - 1].size(), 0.0);
    tape.backprop(wC, wN, grads);
    sp.chain(levels, grads, gz);
    return -softmin;
  };

  double best = -INFINITY;
  std::vector<double> best_z;
  std::vector<std::vector<double>> starts;
  for (const auto& p_full : extra_starts) starts.push_back(sp.encode(projected_stack(os, p_full).levels));
  for (auto seed : seeds) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> z(sp.size());
    for (auto& v : z) v = seed == 0 ? 0.0 : g(rng);
    starts.push_back(std::move(z));
  }
  numeric::BfgsOptions bo;
  bo.max_iter = 200;
  auto consider = [&](const std::vector<double>& z) {
    double v = true_min(z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  };
  for (auto& z : starts) {
    consider(z);
    if (best > 1e-9) break;
    consider(numeric::minimize_bfgs(neg_softmin, z, bo).x);
    if (best > 1e-9) break;
  }
  out.slack = best;
  sp.decode(best_z, out.stack.levels);
  out.stack.levels[0] = projected_stack(os, std::vector<double>(os.level(os.dim()).proj.size(),
                                                                1.0 / os.level(os.dim()).proj.size()))
                            .levels[0];
  return out;
}

AdmissibleOrderings admissible_orderings(const SpongeIFS& ifs, const SearchOptions& opt) {
  require_valid(ifs);
  const int d = ifs.dim(), N = ifs.size();
  AdmissibleOrderings out;
  auto perms = all_permutations(d);

  if (d == 1) {
    out.verdicts.push_back({perms[0], OrderingStatus::CertifiedIn, INFINITY, "single coordinate"});
    return out;
  }
  if (d == 2) {
    // (1,2) needs a map with lambda^(2) <= lambda^(1) (ties go to (1,2));
    // (2,1) needs a map with lambda^(1) < lambda^(2).
    bool first = false, second = false;
    for (int i = 0; i < N; ++i) {
      if (ifs.ratio(i, 1) <= ifs.ratio(i, 0)) first = true;
      if (ifs.ratio(i, 0) < ifs.ratio(i, 1)) second = true;
    }
    for (const auto& sigma : perms) {
      bool in = sigma[0] == 0 ? first : second;
      auto os = build_ordering_system(ifs, sigma);
      std::vector<std::uint64_t> few(opt.seeds.begin(), opt.seeds.begin() + std::min<std::size_t>(4, opt.seeds.size()));
      double slack = max_min_slack(os, few, {}).slack;
      out.verdicts.push_back({sigma, in ? OrderingStatus::CertifiedIn : OrderingStatus::CertifiedOut, slack,
                              in ? "realized by repeating a single map" : "no map realizes this ordering (d = 2)"});
    }
    return out;
  }

  Permutation forced;
  if (forced_ordering(ifs, forced)) {
    for (const auto& sigma : perms) {
      bool in = sigma == forced;
      out.verdicts.push_back({sigma, in ? OrderingStatus::CertifiedIn : OrderingStatus::CertifiedOut,
                              in ? 0.0 : -INFINITY, "coordinate ordering condition holds for every map"});
    }
    return out;
  }

  // sampled words: A_delta is a subset of A
  std::vector<bool> realized(perms.size(), false);
  std::vector<std::vector<double>> word_freqs;
  std::mt19937_64 rng(opt.seeds.empty() ? 0 : opt.seeds[0]);
  std::uniform_int_distribution<int> sym(0, N - 1), len(0, 4), plen(1, 4);
  std::uniform_real_distribution<double> logd(0.5, 30.0);
  for (int s = 0; s < opt.word_samples; ++s) {
    PeriodicWord w;
    if (s < N) {
      w.period = {s};
    } else {
      w.preperiod.resize(len(rng));
      for (auto& x : w.preperiod) x = sym(rng);
      w.period.resize(plen(rng));
      for (auto& x : w.period) x = sym(rng);
    }
    double delta = std::exp(-logd(rng));
    auto sigma = scale_ordering(ifs, w, delta);
    auto idx = std::find(perms.begin(), perms.end(), sigma) - perms.begin();
    realized[idx] = true;
    std::vector<double> f(N, 0.0);
    for (int x : w.period) f[x] += 1.0 / w.period.size();
    word_freqs.push_back(std::move(f));
  }

  for (std::size_t k = 0; k < perms.size(); ++k) {
    auto os = build_ordering_system(ifs, perms[k]);
    double slack = max_min_slack(os, opt.seeds, word_freqs).slack;
    OrderingVerdict v{perms[k], OrderingStatus::HeuristicOut, slack, ""};
    if (realized[k]) {
      v.status = OrderingStatus::CertifiedIn;
      v.reason = "realized by a sampled word";
    } else if (slack >= -kTolQ) {
      v.status = OrderingStatus::CertifiedIn;
      v.reason = "feasible stack found";
    } else {
      v.reason = "no feasible stack found by multi-start search";
    }
    out.verdicts.push_back(std::move(v));
  }
  return out;
}

}  // namespace sponge
