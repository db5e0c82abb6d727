#pragma once

#include <vector>

#include "sponge/ifs.hpp"
#include "sponge/rational.hpp"

namespace sponge::examples {

// Two-map planar carpet: diag(c,d) at the origin and diag(d,c) at (1-d, 1-c).
SpongeIFS baranski_carpet(const Rational& c = Rational(1, 2), const Rational& d = Rational(1, 4));

/// Root of (1/2)^s + (1/4)^s = 1.
double carpet_s();

/// Closed-form exponents of the c=1/2, d=1/4 carpet with weights (u, 1-u).
double carpet_T_sigma(double u, double q);
double carpet_T_omega(double u, double q);
double carpet_affine(double u, double q);
/// log 2 / log((1-u)/u^2); infinite at u = 2^-s.
double carpet_q_star(double u);

enum class CarpetBranch { Omega, Sigma, Affine };
/// Which branch of the piecewise spectrum applies (u folded into [1/2,1)).
CarpetBranch carpet_branch(double u, double q);
double carpet_spectrum(double u, double q);

// Three-dimensional sponge: N maps diag(a,b,1/N) stacked in z, one map diag(c,1-b,1/N) at (1-c,b,0).
struct FJParams {
  double a = 0.5, b = 0.4, c = 0.35;
  int N = 3;
};

/// 1/N < c < b < a < 1-b and a + c < 1.
bool fj_admissible(const FJParams& p);
SpongeIFS fraser_jurga(const FJParams& p);
/// Root of a^t + c^t = 1.
double fj_t(double a, double c);
double fj_T3_sigma(const FJParams& p);
double fj_T3_omega(const FJParams& p);

struct FJCheck {
  FJParams params;
  double T3_sigma = 0.0, T3_omega = 0.0;  // from the generic root solver
  bool sigma_in_Q = false, omega_in_Q = false;
};

/// Closed-form data for sigma = (1,2,3) and omega = (2,1,3).
FJCheck fj_check(const FJParams& p);

struct FJGridResult {
  int instances = 0;
  std::vector<FJCheck> both_out;      // condition (1) violations
  std::vector<FJCheck> sigma_out_bad;  // sigma out but T3_omega < T3_sigma
  std::vector<FJCheck> omega_out_bad;  // omega out but T3_sigma < T3_omega
  int sigma_out = 0, omega_out = 0;
  bool ok() const { return both_out.empty() && sigma_out_bad.empty() && omega_out_bad.empty(); }
};

/// 0.02 <= c <= 0.49, c+0.01 <= b <= 0.5, b+0.01 <= a <= 1-c-0.01 in increments of `step`,
/// restricted to admissible parameters.
FJGridResult fj_grid_search(const std::vector<int>& Ns, double step);

}  // namespace sponge::examples
