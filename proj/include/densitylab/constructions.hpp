#pragma once

#include <optional>
#include <string>
#include <vector>

#include "densitylab/configuration.hpp"

namespace dlab {

// ------------------------------------------------------------ polynomials

/// Coefficients in increasing degree: {c0, c1, c2, ...}.
using Polynomial = std::vector<Rational>;

Rational evaluate(const Polynomial& poly, const Rational& x);

/// Bisection on [lo, hi] (sign change required) for `steps` halvings.
/// Returns the midpoint of the final bracket.
Rational bisect_root(const Polynomial& poly, Rational lo, Rational hi, int steps);

/// Bisection steps for the constants: DF_PRECISION_BITS when set (clamped to
/// [48, 4096]), otherwise 213 (about 64 decimal digits).
int precision_bits();

/// q^3 + q^2 + q - 1
Polynomial upper_cubic();
/// 4d^3 + 2d^2 + 3d - 1
Polynomial lower_cubic();
/// 2x^2 + 3x - 1, whose positive root is (sqrt(17) - 3)/4
Polynomial kolyada_quadratic();
/// 8d^3 + 4d^2 + 2d - 1
Polynomial conjecture_cubic();

struct BoundConstant {
  std::string name;
  Rational value;  // bisection midpoint
  double residual = 0;  // |p(value)|
  Polynomial poly;
};

struct BoundConstants {
  BoundConstant q_upper;
  BoundConstant delta_upper;  // q_upper / 2
  BoundConstant delta_lower;
  BoundConstant kolyada_upper;
  BoundConstant conjectured;
};

BoundConstants solve_bound_constants(int steps = precision_bits());

/// One named constant: "upper", "lower", "kolyada", "conjecture" (or "q").
BoundConstant solve_constant(const std::string& which, int steps = precision_bits());

/// 4d^3 + 2d^2 + 3d evaluated exactly.
Rational lower_bound_polynomial(const Rational& delta);

// ---------------------------------------------------------- C(m, s, N)

struct CmsnParams {
  Rational m;
  Rational s;
  long n = 1;
};

void validate(const CmsnParams& params);

/// N teeth (1-m + k m/N, 1-m + (k+s) m/N), k = 0..N-1.
Configuration build_cmsn(const CmsnParams& params);

/// Solution of 1/m - s = sm = 1/s - 1 at full bisection precision.
struct OptimalParams {
  Rational q, m, s;
};
OptimalParams optimal_params(int steps = precision_bits());

/// (m*, s*) rounded to the best rationals with denominator <= max_den.
CmsnParams optimal_cmsn(long n, long max_den = 1'000'000);

struct CmsnTableRow {
  int family = 0;  // 1: endpoint 0, 2: endpoint 1-m, 3: last endpoint, 4: all others
  Rational endpoint;
  Rational radius;
  Rational twice_density;  // exact, 2 λ(C | I_radius(endpoint))
  Rational closed_form;    // table value at the same (m, s)
  Rational difference() const { return abs(twice_density - closed_form); }
};

std::vector<CmsnTableRow> cmsn_table(const CmsnParams& params);

// ------------------------------------------------------------ H(epsilon)

struct HApprox {
  Configuration base;
  IntervalSet base_part;  // C ∩ (0,1)
  Rational epsilon;
  int depth = 0;
  std::vector<IntervalSet> levels;  // levels[k] = H_{k+1}

  /// Endpoint counts of the base: with and without 0.
  std::size_t endpoints_with_zero() const { return 2 * base_part.size() + 1; }
  std::size_t endpoints_without_zero() const { return 2 * base_part.size(); }
};

struct HApproxError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// H_1 = C ∩ (0,1); H_{n+1} attaches a_j(n) - ε^n C̃ and b_j(n) + ε^n C̃ at
/// every interval (a_j(n), b_j(n)) of H_n. Throws when attached copies overlap
/// or touch anything.
HApprox build_h_approx(const Configuration& base, const Rational& epsilon, int depth);

struct TailReport {
  int level = 0;
  Rational center;
  Rational omega;
  Rational window_radius;  // ε^{n-1} ω
  std::size_t m_used = 0;  // endpoint count used in the bounds (the larger one)
  Rational tail_built;     // λ((H_depth \ H_n) ∩ window)
  Rational remainder_bound;  // bound for λ(H \ H_depth)
  std::optional<Rational> remainder_bound_valid;  // unset when the geometric series diverges
  Rational tail_bound;     // ε^{n-1} M ε / (1 - M ε)
  bool tail_ok = false;
  std::vector<Rational> level_masses_in_window;  // λ((H_{k+1} \ H_k) ∩ window), k = n..depth-1
  std::vector<Rational> level_masses;            // same without the window
  Rational density_n;                            // λ(H_n | window)
  Rational density_assembled;                    // max over nearby x of λ(H_depth | I(x)) + remainder share
  Rational density_bound;                        // density_n + (ε/2ω)(1 + M/(1 - Mε))
  bool density_ok = false;
};

TailReport h_tail_check(const HApprox& h, int n, const Rational& v, const Rational& omega);

}  // namespace dlab
