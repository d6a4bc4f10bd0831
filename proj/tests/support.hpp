#pragma once

// Test-only oracles. None of these touch the breakpoint sweep: measures come
// from Configuration::measure_in or from an independent prefix-sum routine.

#include <algorithm>
#include <cmath>
#include <random>
#include <optional>
#include <set>
#include <vector>

#include "densitylab/configuration.hpp"
#include "densitylab/random.hpp"

namespace dlab::testing {

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

/// r in [1, max_r], endpoints k/den with den <= max_den and k <= 4 den + 2r.
inline Configuration random_configuration(std::mt19937_64& rng, int max_r = 6, long max_den = 64) {
  const long r = uniform_int(rng, 1, max_r);
  const long den = uniform_int(rng, 2, max_den);
  std::set<long> ks;
  while (static_cast<long>(ks.size()) < 2 * r) ks.insert(uniform_int(rng, 1, 4 * den + 2 * r));
  std::vector<long> sorted(ks.begin(), ks.end());
  std::vector<std::pair<Rational, Rational>> raw;
  for (std::size_t i = 0; i < sorted.size(); i += 2) raw.emplace_back(q(sorted[i], den), q(sorted[i + 1], den));
  return make_configuration(std::move(raw));
}

/// Escape score at endpoint p from rel_measure at every radius |p - e|.
inline Rational brute_escape(const Configuration& c, const Rational& p) {
  Rational best = q(1, 2);
  for (const auto& e : c.endpoint_values()) {
    if (e == p) continue;
    Rational d = c.rel_measure(ball(p, abs(p - e)));
    Rational x = d > 1 - d ? d : Rational(1 - d);
    if (x > best) best = x;
  }
  return best;
}

inline Rational brute_delta_star(const Configuration& c) {
  Rational best = 1;
  for (const auto& p : c.endpoint_values()) best = std::min(best, brute_escape(c, p));
  return 1 - best;
}

struct BruteExtrema {
  Rational sup = q(1, 2), inf = q(1, 2);
  std::optional<Rational> sup_radius, inf_radius;
};

inline BruteExtrema brute_extrema(const Configuration& c, const Rational& p) {
  std::vector<Rational> radii;
  for (const auto& e : c.endpoint_values())
    if (e != p) radii.push_back(abs(p - e));
  std::sort(radii.begin(), radii.end());
  BruteExtrema out;
  for (const auto& w : radii) {
    Rational d = c.rel_measure(ball(p, w));
    if (d > out.sup) {
      out.sup = d;
      out.sup_radius = w;
    }
    if (d < out.inf) {
      out.inf = d;
      out.inf_radius = w;
    }
  }
  return out;
}

/// Float measure of C ∩ (lo, hi) via prefix sums over the interval list.
class FloatMeasure {
 public:
  explicit FloatMeasure(const Configuration& c) {
    double acc = 0;
    for (const auto& iv : c.intervals()) {
      lo_.push_back(to_double(iv.lo));
      hi_.push_back(to_double(iv.hi));
      prefix_.push_back(acc);
      acc += hi_.back() - lo_.back();
    }
    prefix_.push_back(acc);
  }
  /// λ(C ∩ (-inf, x)), including the ray.
  double below(double x) const {
    if (x <= 0) return x;
    auto k = static_cast<std::size_t>(std::upper_bound(lo_.begin(), lo_.end(), x) - lo_.begin());
    if (k == 0) return 0;
    double m = prefix_[k - 1];
    return m + std::min(x, hi_[k - 1]) - lo_[k - 1];
  }
  double density(double p, double w) const { return (below(p + w) - below(p - w)) / (2 * w); }

 private:
  std::vector<double> lo_, hi_, prefix_;
};

/// Float δ* from densities sampled at every breakpoint radius and the midpoints
/// between consecutive ones.
inline double sampled_delta_star(const Configuration& c) {
  FloatMeasure fm(c);
  std::vector<double> pts;
  for (const auto& e : c.endpoint_values()) pts.push_back(to_double(e));
  double min_escape = 1;
  std::vector<double> radii;
  for (double p : pts) {
    radii.clear();
    for (double e : pts)
      if (e != p) radii.push_back(std::abs(p - e));
    std::sort(radii.begin(), radii.end());
    double esc = 0.5, prev = 0;
    for (double w : radii) {
      for (double x : {w, 0.5 * (prev + w)}) {
        if (x <= 0) continue;
        double d = fm.density(p, x);
        esc = std::max({esc, d, 1 - d});
      }
      prev = w;
    }
    min_escape = std::min(min_escape, esc);
  }
  return 1 - min_escape;
}

/// x ∈ C(m, s, N) for non-endpoint x: 1-m < x < 1 and 0 < frac(N(x+m-1)/m) < s.
inline bool cmsn_predicate(const Rational& m, const Rational& s, long n, const Rational& x) {
  if (!(1 - m < x && x < 1)) return false;
  Rational t = n * (x + m - 1) / m;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  Rational frac = t - Rational(fl);
  return 0 < frac && frac < s;
}

}  // namespace dlab::testing
