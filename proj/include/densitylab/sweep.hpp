#pragma once

// Breakpoint sweep around an endpoint, generic over the scalar type.
//
// `pts` is the sorted endpoint list {0, a_1, b_1, ..., a_r, b_r}. Segment k,
// the gap between pts[k] and pts[k+1], belongs to C iff k is odd; everything
// left of 0 is the ray and everything right of b_r is outside C.
//
// Around p = pts[j] the mass m(w) = λ(C ∩ (p-w, p+w)) is piecewise linear with
// slope (#sides currently inside C) in {0,1,2}; it changes slope only at the
// radii |p - pts[k]|. The density is m(w) / (2w).

#include <cstddef>
#include <span>
#include <utility>

namespace dlab::sweep {

/// Membership slope of segment k in an endpoint list of size n.
inline int segment_in_c(std::ptrdiff_t k, std::ptrdiff_t n) {
  if (k < 0) return 1;
  if (k >= n - 1) return 0;
  return static_cast<int>(k & 1);
}

/// Calls visit(radius, mass, slope_before, slope_after) at every breakpoint in
/// increasing radius order; stops early when visit returns false. Returns the
/// slope of the terminal piece (always 1: ray on the left, nothing on the right)
/// or -1 if the visitor stopped the sweep.
template <class Scalar, class Visit>
int for_each_breakpoint(std::span<const Scalar> pts, std::size_t j, Visit&& visit) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
  const auto jj = static_cast<std::ptrdiff_t>(j);
  const Scalar& p = pts[j];
  std::ptrdiff_t l = jj - 1;
  std::ptrdiff_t r = jj + 1;
  int left = segment_in_c(jj - 1, n);
  int right = segment_in_c(jj, n);
  Scalar radius = 0;
  Scalar mass = 0;
  Scalar dl{}, dr{}, next{};
  while (l >= 0 || r < n) {
    const bool has_l = l >= 0;
    const bool has_r = r < n;
    if (has_l) dl = p - pts[l];
    if (has_r) dr = pts[r] - p;
    if (has_l && (!has_r || dl <= dr))
      next = dl;
    else
      next = dr;
    const int slope = left + right;
    if (slope != 0) mass += slope * (next - radius);
    radius = next;
    if (has_l && dl == next) {
      left = segment_in_c(l - 1, n);
      --l;
    }
    if (has_r && dr == next) {
      right = segment_in_c(r, n);
      ++r;
    }
    if (!visit(static_cast<const Scalar&>(radius), static_cast<const Scalar&>(mass), slope,
               left + right))
      return -1;
  }
  return left + right;
}

/// a/(2b) versus c/(2d) for positive b, d.
template <class Scalar>
int compare_density(const Scalar& mass_a, const Scalar& radius_a, const Scalar& mass_b,
                    const Scalar& radius_b) {
  Scalar lhs = mass_a * radius_b;
  Scalar rhs = mass_b * radius_a;
  return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
}

/// Escape score numerator at a breakpoint, over the denominator 2*radius:
/// max(mass, 2*radius - mass).
template <class Scalar>
Scalar escape_numerator(const Scalar& mass, const Scalar& radius) {
  Scalar other = radius + radius - mass;
  return mass < other ? other : mass;
}

/// Sup/inf of the density over all breakpoints, tracking only values strictly
/// beyond 1/2 (the 0+ and +inf limits are both exactly 1/2).
template <class Scalar>
struct BreakpointExtrema {
  bool has_sup = false;  // some breakpoint density > 1/2
  bool has_inf = false;  // some breakpoint density < 1/2
  Scalar sup_mass{}, sup_radius{};
  Scalar inf_mass{}, inf_radius{};
};

template <class Scalar>
BreakpointExtrema<Scalar> breakpoint_extrema(std::span<const Scalar> pts, std::size_t j) {
  BreakpointExtrema<Scalar> ex;
  for_each_breakpoint(pts, j, [&](const Scalar& w, const Scalar& m, int, int) {
    if (w < m) {
      if (!ex.has_sup || compare_density(m, w, ex.sup_mass, ex.sup_radius) > 0) {
        ex.has_sup = true;
        ex.sup_mass = m;
        ex.sup_radius = w;
      }
    } else if (m < w) {
      if (!ex.has_inf || compare_density(m, w, ex.inf_mass, ex.inf_radius) < 0) {
        ex.has_inf = true;
        ex.inf_mass = m;
        ex.inf_radius = w;
      }
    }
    return true;
  });
  return ex;
}

template <class Scalar>
struct Fraction {
  Scalar num;
  Scalar den;
};

/// Escape score of endpoint j as num/den, starting from the limit value 1/2.
/// With a `cutoff` the sweep stops once the running escape reaches it, so the
/// result is then only a lower bound that is >= cutoff.
template <class Scalar>
Fraction<Scalar> escape_score(std::span<const Scalar> pts, std::size_t j,
                              const Fraction<Scalar>* cutoff = nullptr) {
  Fraction<Scalar> best{Scalar(1), Scalar(2)};
  for_each_breakpoint(pts, j, [&](const Scalar& w, const Scalar& m, int, int) {
    Scalar num = escape_numerator(m, w);
    Scalar den = w + w;
    if (num * best.den > best.num * den) {
      best.num = num;
      best.den = den;
      if (cutoff && !(best.num * cutoff->den < cutoff->num * best.den)) return false;
    }
    return true;
  });
  return best;
}

/// min over endpoints of the escape score, with pruning. Returns the minimum
/// and the smallest index attaining it.
template <class Scalar>
std::pair<Fraction<Scalar>, std::size_t> min_escape(std::span<const Scalar> pts) {
  Fraction<Scalar> best = escape_score(pts, 0);
  std::size_t arg = 0;
  for (std::size_t j = 1; j < pts.size(); ++j) {
    Fraction<Scalar> e = escape_score(pts, j, &best);
    if (e.num * best.den < best.num * e.den) {
      best = e;
      arg = j;
    }
  }
  return {best, arg};
}

}  // namespace dlab::sweep
