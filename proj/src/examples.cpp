#include "sponge/examples.hpp"

#include <cmath>

#include "sponge/error.hpp"
#include "sponge/orderings.hpp"
#include "sponge/pressure.hpp"

namespace sponge::examples {

SpongeIFS baranski_carpet(const Rational& c, const Rational& d) {
  std::vector<DiagonalMap> maps{{{c, d}, {0, 0}}, {{d, c}, {1 - d, 1 - c}}};
  return SpongeIFS(2, std::move(maps));
}

double carpet_s() { return std::log((std::sqrt(5.0) - 1.0) / 2.0) / std::log(0.5); }

double carpet_T_sigma(double u, double q) {
  double r = std::pow((1.0 - u) / (u * u), q);
  return -(q * std::log(u / (1.0 - u)) + std::log(0.5 * std::sqrt(1.0 + 4.0 * r) - 0.5)) / std::log(2.0);
}

double carpet_T_omega(double u, double q) { return carpet_T_sigma(1.0 - u, q); }

double carpet_affine(double u, double q) { return 2.0 / 3.0 + std::log(u * (1.0 - u)) / (3.0 * std::log(2.0)) * q; }

double carpet_q_star(double u) {
  double den = std::log((1.0 - u) / (u * u));
  if (den == 0.0) return INFINITY;
  return std::log(2.0) / den;
}

CarpetBranch carpet_branch(double u, double q) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("u must lie in (0,1)");
  if (u < 0.5) u = 1.0 - u;
  if (q <= 0.0) return CarpetBranch::Omega;
  if (u >= std::pow(0.5, carpet_s())) return CarpetBranch::Sigma;
  return q <= carpet_q_star(u) ? CarpetBranch::Sigma : CarpetBranch::Affine;
}

double carpet_spectrum(double u, double q) {
  auto br = carpet_branch(u, q);
  if (u < 0.5) u = 1.0 - u;
  switch (br) {
    case CarpetBranch::Omega: return carpet_T_omega(u, q);
    case CarpetBranch::Sigma: return carpet_T_sigma(u, q);
    default: return carpet_affine(u, q);
  }
}

bool fj_admissible(const FJParams& p) {
  double d = 1.0 - p.b;
  return p.N >= 2 && 1.0 / p.N < p.c && p.c < p.b && p.b < p.a && p.a < d && p.a + p.c < 1.0;
}

SpongeIFS fraser_jurga(const FJParams& p) {
  if (!fj_admissible(p)) throw DomainError("parameters need 1/N < c < b < a < 1-b and a + c < 1");
  Rational a = rational_from_shortest(p.a), b = rational_from_shortest(p.b), c = rational_from_shortest(p.c);
  Rational z(1, p.N);
  std::vector<DiagonalMap> maps;
  for (int i = 0; i < p.N; ++i) maps.push_back({{a, b, z}, {0, 0, Rational(i, p.N)}});
  maps.push_back({{c, 1 - b, z}, {1 - c, b, 0}});
  return SpongeIFS(3, std::move(maps));
}

double fj_t(double a, double c) {
  auto f = [&](double t) { return std::log(std::pow(a, t) + std::pow(c, t)); };
  auto df = [&](double t) {
    double x = std::pow(a, t), y = std::pow(c, t);
    return (x * std::log(a) + y * std::log(c)) / (x + y);
  };
  return numeric::solve_decreasing(f, df, 1e-15).x;
}

double fj_T3_sigma(const FJParams& p) {
  double t = fj_t(p.a, p.c);
  return t + std::log(p.N * std::pow(p.a, t) + std::pow(p.c, t)) / std::log(static_cast<double>(p.N));
}

double fj_T3_omega(const FJParams& p) {
  return 1.0 + std::log(p.N * p.b + (1.0 - p.b)) / std::log(static_cast<double>(p.N));
}

FJCheck fj_check(const FJParams& p) {
  auto ifs = fraser_jurga(p);
  FJCheck r;
  r.params = p;
  for (int k = 0; k < 2; ++k) {
    Permutation sigma = k == 0 ? Permutation{0, 1, 2} : Permutation{1, 0, 2};
    auto os = build_ordering_system(ifs, sigma);
    LevelPotential zero;
    for (int n = 1; n <= 3; ++n) zero.emplace_back(os.count(n), 0.0);
    auto cf = solve_closed_form(os, zero);
    (k == 0 ? r.T3_sigma : r.T3_omega) = cf.exponents.back();
    (k == 0 ? r.sigma_in_Q : r.omega_in_Q) = cf.in_Q;
  }
  return r;
}

FJGridResult fj_grid_search(const std::vector<int>& Ns, double step) {
  FJGridResult g;
  // integer hundredths keep the grid exact
  int s = static_cast<int>(std::lround(step * 100.0));
  if (s < 1) throw DomainError("grid step must be at least 0.01");
  for (int N : Ns)
    for (int c = 2; c <= 49; c += s)
      for (int b = c + 1; b <= 50; b += s)
        for (int a = b + 1; a <= 100 - c - 1; a += s) {
          FJParams p{a / 100.0, b / 100.0, c / 100.0, N};
          if (!fj_admissible(p)) continue;
          auto r = fj_check(p);
          ++g.instances;
          if (!r.sigma_in_Q) ++g.sigma_out;
          if (!r.omega_in_Q) ++g.omega_out;
          if (!r.sigma_in_Q && !r.omega_in_Q) g.both_out.push_back(r);
          if (!r.sigma_in_Q && r.T3_omega < r.T3_sigma - 1e-12) g.sigma_out_bad.push_back(r);
          if (!r.omega_in_Q && r.T3_sigma < r.T3_omega - 1e-12) g.omega_out_bad.push_back(r);
        }
  return g;
}

}  // namespace sponge::examples
