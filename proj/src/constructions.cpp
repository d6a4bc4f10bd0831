#include "densitylab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace dlab {

// ------------------------------------------------------------ polynomials

Rational evaluate(const Polynomial& poly, const Rational& x) {
  Rational acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rational bisect_root(const Polynomial& poly, Rational lo, Rational hi, int steps) {
  Rational flo = evaluate(poly, lo);
  Rational fhi = evaluate(poly, hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0)) throw std::invalid_argument("bisect_root: no sign change on bracket");
  for (int i = 0; i < steps; ++i) {
    Rational mid = (lo + hi) / 2;
    Rational fm = evaluate(poly, mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

int precision_bits() {
  if (const char* env = std::getenv("DF_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<int>(std::clamp(v, 48L, 4096L));
  }
  return 213;
}

namespace {
Polynomial ints(std::initializer_list<long> cs) {
  Polynomial p;
  for (long c : cs) p.emplace_back(c);
  return p;
}

BoundConstant solve(const std::string& name, const Polynomial& poly, int steps) {
  BoundConstant c;
  c.name = name;
  c.poly = poly;
  c.value = bisect_root(poly, 0, 1, steps);
  c.residual = std::fabs(to_double(evaluate(poly, c.value)));
  return c;
}
}  // namespace

Polynomial upper_cubic() { return ints({-1, 1, 1, 1}); }
Polynomial lower_cubic() { return ints({-1, 3, 2, 4}); }
Polynomial kolyada_quadratic() { return ints({-1, 3, 2}); }
Polynomial conjecture_cubic() { return ints({-1, 2, 4, 8}); }

Rational lower_bound_polynomial(const Rational& delta) {
  return evaluate(lower_cubic(), delta) + 1;
}

BoundConstant solve_constant(const std::string& which, int steps) {
  if (which == "q") return solve("q_upper", upper_cubic(), steps);
  if (which == "upper") {
    BoundConstant q = solve("q_upper", upper_cubic(), steps);
    BoundConstant d;
    d.name = "delta_upper";
    d.poly = conjecture_cubic();
    d.value = q.value / 2;
    d.residual = std::fabs(to_double(evaluate(d.poly, d.value)));
    return d;
  }
  if (which == "lower") return solve("delta_lower", lower_cubic(), steps);
  if (which == "kolyada") return solve("kolyada_upper", kolyada_quadratic(), steps);
  if (which == "conjecture") return solve("conjectured", conjecture_cubic(), steps);
  throw std::invalid_argument("unknown constant '" + which +
                              "' (expected upper, lower, kolyada or conjecture)");
}

BoundConstants solve_bound_constants(int steps) {
  BoundConstants out;
  out.q_upper = solve_constant("q", steps);
  out.delta_upper = solve_constant("upper", steps);
  out.delta_lower = solve_constant("lower", steps);
  out.kolyada_upper = solve_constant("kolyada", steps);
  out.conjectured = solve_constant("conjecture", steps);
  if (!(out.delta_lower.value < out.delta_upper.value &&
        out.delta_upper.value < out.kolyada_upper.value))
    throw std::logic_error("bound constants out of order");
  return out;
}

// ---------------------------------------------------------- C(m, s, N)

void validate(const CmsnParams& p) {
  if (p.m <= 0 || p.m >= 1) throw std::invalid_argument("C(m,s,N) needs 0 < m < 1");
  if (p.s <= 0 || p.s >= 1) throw std::invalid_argument("C(m,s,N) needs 0 < s < 1");
  if (p.n < 1) throw std::invalid_argument("C(m,s,N) needs N >= 1");
}

Configuration build_cmsn(const CmsnParams& p) {
  validate(p);
  std::vector<Interval> teeth;
  teeth.reserve(static_cast<std::size_t>(p.n));
  const Rational start = 1 - p.m;
  const Rational step = p.m / p.n;
  for (long k = 0; k < p.n; ++k) teeth.emplace_back(start + k * step, start + (k + p.s) * step);
  return Configuration::make(std::move(teeth));
}

OptimalParams optimal_params(int steps) {
  OptimalParams out;
  out.q = bisect_root(upper_cubic(), 0, 1, steps);
  out.s = 1 / (1 + out.q);
  out.m = out.q * (1 + out.q);
  return out;
}

CmsnParams optimal_cmsn(long n, long max_den) {
  auto opt = optimal_params();
  CmsnParams p;
  p.m = limit_denominator(opt.m, max_den);
  p.s = limit_denominator(opt.s, max_den);
  p.n = n;
  return p;
}

std::vector<CmsnTableRow> cmsn_table(const CmsnParams& p) {
  Configuration c = build_cmsn(p);
  const Rational one = 1;
  auto twice = [&](const Rational& v, const Rational& r) -> Rational { return 2 * c.rel_measure(ball(v, r)); };
  std::vector<CmsnTableRow> rows;

  rows.push_back({1, 0, one, twice(0, one), p.s * p.m + 1});
  const Rational first = 1 - p.m;
  rows.push_back({2, first, p.m, twice(first, p.m), 2 - (1 / p.m - p.s)});
  const Rational last = c.last();
  rows.push_back({3, last, one, twice(last, one), p.s * p.m});

  const Rational small = p.s * p.m / p.n;
  const Rational other_closed = 2 - (1 / p.s - 1);
  for (const auto& e : c.endpoint_values()) {
    if (e == 0 || e == first || e == last) continue;
    rows.push_back({4, e, small, twice(e, small), other_closed});
  }
  return rows;
}

// ------------------------------------------------------------ H(epsilon)

namespace {

Rational power(const Rational& base, int exp) {
  Rational out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

HApprox build_h_approx(const Configuration& base, const Rational& epsilon, int depth) {
  if (epsilon <= 0 || epsilon >= 1) throw HApproxError("epsilon must lie in (0, 1)");
  if (depth < 1) throw HApproxError("depth must be >= 1");
  std::vector<Interval> tilde;
  for (const auto& iv : base.intervals()) {
    if (iv.lo >= 1) break;
    tilde.emplace_back(iv.lo, iv.hi < 1 ? iv.hi : Rational(1));
  }
  if (tilde.empty()) throw HApproxError("C ∩ (0,1) is empty");

  HApprox h{base, IntervalSet::from_unsorted(tilde), epsilon, depth, {}};
  h.levels.push_back(h.base_part);
  Rational scale = epsilon;
  for (int n = 1; n < depth; ++n) {
    std::vector<Interval> next;
    for (const auto& iv : h.levels.back().parts()) {
      for (const auto& t : tilde) {
        next.emplace_back(iv.lo - scale * t.hi, iv.lo - scale * t.lo);
        next.emplace_back(iv.hi + scale * t.lo, iv.hi + scale * t.hi);
      }
      next.push_back(iv);
    }
    std::sort(next.begin(), next.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < next.size(); ++i)
      if (next[i].lo <= next[i - 1].hi)
        throw HApproxError("epsilon too large: attached copies meet near " +
                           to_string(next[i].lo) + " at level " + std::to_string(n + 1));
    h.levels.push_back(IntervalSet::from_unsorted(std::move(next)));
    scale *= epsilon;
  }
  return h;
}

TailReport h_tail_check(const HApprox& h, int n, const Rational& v, const Rational& omega) {
  if (n < 1 || n >= h.depth) throw HApproxError("h_tail_check needs 1 <= n < depth");
  if (omega <= 0) throw HApproxError("omega must be positive");
  const IntervalSet& hn = h.levels[static_cast<std::size_t>(n - 1)];
  bool is_endpoint = std::any_of(hn.parts().begin(), hn.parts().end(),
                                 [&](const Interval& iv) { return iv.lo == v || iv.hi == v; });
  if (!is_endpoint) throw HApproxError(to_string(v) + " is not an endpoint of H_n");

  TailReport rep;
  rep.level = n;
  rep.center = v;
  rep.omega = omega;
  const Rational& eps = h.epsilon;
  rep.window_radius = power(eps, n - 1) * omega;
  const Interval window = ball(v, rep.window_radius);
  const IntervalSet& deepest = h.levels.back();

  rep.m_used = h.endpoints_with_zero();
  const Rational M = static_cast<long>(rep.m_used);
  const Rational r1 = static_cast<long>(h.base_part.size());
  const Rational base_mass = h.base_part.measure();

  // Level k+1 adds 2 r(k) copies of mass ε^k λ(C̃), r(k+1) = r(k)(1 + 2 r_1).
  const Rational growth = eps * (1 + 2 * r1);
  if (growth < 1) {
    Rational r_depth = static_cast<long>(deepest.size());
    rep.remainder_bound = 2 * r_depth * power(eps, h.depth) * base_mass / (1 - growth);
    rep.remainder_bound_valid = rep.remainder_bound;
  }

  rep.tail_built = deepest.measure_in(window) - hn.measure_in(window);
  if (M * eps < 1) rep.tail_bound = power(eps, n - 1) * M * eps / (1 - M * eps);
  rep.tail_ok = M * eps < 1 && rep.remainder_bound_valid &&
                rep.tail_built + rep.remainder_bound < rep.tail_bound;

  for (int k = n; k < h.depth; ++k) {
    const auto& lo = h.levels[static_cast<std::size_t>(k - 1)];
    const auto& hi = h.levels[static_cast<std::size_t>(k)];
    rep.level_masses_in_window.push_back(hi.measure_in(window) - lo.measure_in(window));
    rep.level_masses.push_back(hi.measure() - lo.measure());
  }

  const Rational width = 2 * rep.window_radius;
  rep.density_n = hn.measure_in(window) / width;
  const Rational reach = power(eps, n);
  Rational worst = deepest.measure_in(window);
  for (const auto& iv : deepest.parts()) {
    for (const Rational* x : {&iv.lo, &iv.hi}) {
      if (abs(*x - v) > reach) continue;
      Rational m = deepest.measure_in(ball(*x, rep.window_radius));
      if (m > worst) worst = m;
    }
  }
  rep.density_assembled = (worst + rep.remainder_bound) / width;
  if (M * eps < 1)
    rep.density_bound = rep.density_n + eps / (2 * omega) * (1 + M / (1 - M * eps));
  rep.density_ok = M * eps < 1 && rep.remainder_bound_valid &&
                   rep.density_assembled < rep.density_bound;
  return rep;
}

}  // namespace dlab
