#include "densitylab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include "densitylab/constructions.hpp"
#include "densitylab/random.hpp"

namespace dlab {
namespace {

const Rational kHalf = make_rational(1, 2);

std::string join_values(const std::vector<Rational>& vs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? " " : "") << to_string(vs[i]);
  return os.str();
}

Check make_check(std::string name, CheckKind kind, bool passed, const Rational& lhs,
                 std::string relation, const Rational& rhs, std::string detail = {}) {
  return Check{std::move(name), kind, true, passed, to_string(lhs), std::move(relation),
               to_string(rhs), std::move(detail)};
}

Check skipped(std::string name, CheckKind kind, std::string why) {
  Check c;
  c.name = std::move(name);
  c.kind = kind;
  c.applicable = false;
  c.passed = true;
  c.detail = std::move(why);
  return c;
}

/// J \ C as an interval set (J inside (0, ∞)).
IntervalSet complement_in(const Configuration& c, const Interval& j) {
  std::vector<Interval> out;
  Rational cursor = j.lo;
  for (const auto& iv : c.intervals()) {
    if (iv.hi <= cursor) continue;
    if (iv.lo >= j.hi) break;
    if (cursor < iv.lo) out.emplace_back(cursor, iv.lo);
    cursor = iv.hi;
    if (cursor >= j.hi) break;
  }
  if (cursor < j.hi) out.emplace_back(cursor, j.hi);
  return IntervalSet::from_unsorted(std::move(out));
}

}  // namespace

// ------------------------------------------------------------------ Lemma 1

void validate_cover(const CoverSystem& sys) {
  if (sys.cover.empty()) throw HypothesisError("empty cover");
  for (const auto& iv : sys.cover)
    if (!sys.host.includes(iv)) throw HypothesisError("cover interval leaves the host interval");
  auto u = IntervalSet::from_unsorted(sys.cover);
  if (u.size() != 1 || u.parts().front() != sys.host)
    throw HypothesisError("cover union is not the host interval");
}

std::vector<Interval> canonicalize_cover(const CoverSystem& sys) {
  validate_cover(sys);
  std::vector<Interval> sorted = sys.cover;
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi > b.hi);
  });
  std::vector<Interval> chain;
  Rational reach = sys.host.lo;
  std::size_t i = 0;
  while (reach < sys.host.hi) {
    const Interval* best = nullptr;
    const bool first = chain.empty();
    // Candidates must cover the point `reach` (or start at the host's lo).
    for (; i < sorted.size(); ++i) {
      const Interval& iv = sorted[i];
      bool starts_ok = first ? iv.lo <= reach : iv.lo < reach;
      if (!starts_ok) break;
      if (iv.hi > reach && (!best || iv.hi > best->hi)) best = &iv;
    }
    if (!best) throw HypothesisError("cover has a hole at " + to_string(reach));
    chain.push_back(*best);
    reach = best->hi;
  }
  return chain;
}

Lemma1Report lemma1_check(const CoverSystem& sys, const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw HypothesisError("delta must lie in (0, 1)");
  validate_cover(sys);
  const Rational need = 1 - delta;
  for (const auto& iv : sys.cover) {
    Rational d = sys.b.measure_in(iv) / iv.length();
    if (d < need)
      throw HypothesisError("hypothesis fails on (" + to_string(iv.lo) + ", " + to_string(iv.hi) +
                            "): density " + to_string(d) + " < " + to_string(need));
  }
  Lemma1Report rep;
  rep.density = sys.b.measure_in(sys.host) / sys.host.length();
  rep.bound = (1 - delta) / (1 + delta);
  rep.holds = rep.density >= rep.bound;
  rep.canonical = canonicalize_cover(sys);

  const auto& ch = rep.canonical;
  std::vector<Rational> xs(ch.size(), 0), xbs(ch.size(), 0);
  for (std::size_t j = 0; j + 1 < ch.size(); ++j) {
    Rational lo = ch[j + 1].lo, hi = ch[j].hi;
    if (lo < hi) {
      xs[j] = hi - lo;
      xbs[j] = sys.b.measure_in(Interval(lo, hi));
    }
  }
  rep.x = rep.y = rep.x_b = rep.y_b = 0;
  for (std::size_t j = 0; j < ch.size(); ++j) {
    Rational left = j ? xs[j - 1] : Rational(0);
    Rational left_b = j ? xbs[j - 1] : Rational(0);
    rep.x += xs[j];
    rep.x_b += xbs[j];
    rep.y += ch[j].length() - left - xs[j];
    rep.y_b += sys.b.measure_in(ch[j]) - left_b - xbs[j];
  }
  rep.averaged = (2 * rep.x_b + rep.y_b) / (2 * rep.x + rep.y);
  rep.averaged_holds = rep.averaged >= need;
  return rep;
}

Remark5Report remark5_experiment(const CoverSystem& sys, const Rational& delta) {
  // Same hypothesis as Lemma 1; the bound is the conjectural one.
  Lemma1Report base = lemma1_check(sys, delta);
  Remark5Report rep;
  rep.density = base.density;
  rep.bound = 1 / (1 + 2 * delta);
  rep.holds = rep.density >= rep.bound;
  return rep;
}

CoverSystem random_cover_system(std::mt19937_64& rng, const Rational& delta) {
  constexpr long kUnits = 100000;
  const double need = 1.0 - to_double(delta);
  const Rational exact_need = 1 - delta;
  auto unit = [](long k) { return make_rational(k, kUnits); };

  for (;;) {
    const long n = uniform_int(rng, 1, 6);
    const long atoms = 2 * n - 1;
    std::set<long> cuts;
    while (static_cast<long>(cuts.size()) < atoms - 1) cuts.insert(uniform_int(rng, 1, kUnits - 1));
    std::vector<long> c{0};
    c.insert(c.end(), cuts.begin(), cuts.end());
    c.push_back(kUnits);
    auto len = [&](long a) { return c[static_cast<std::size_t>(a + 1)] - c[static_cast<std::size_t>(a)]; };

    // Atom 2(j-1) is the private part of I_j, atom 2j-1 the overlap I_j ∩ I_{j+1}.
    std::vector<long> fill(static_cast<std::size_t>(atoms), 0);
    bool ok = true;
    for (long j = 1; j <= n && ok; ++j) {
      const long xl = j > 1 ? 2 * j - 3 : -1;
      const long ya = 2 * j - 2;
      const long xr = j < n ? 2 * j - 1 : -1;
      const long first = xl >= 0 ? xl : ya;
      const long last = xr >= 0 ? xr : ya;
      const long width = c[static_cast<std::size_t>(last + 1)] - c[static_cast<std::size_t>(first)];
      if (xr >= 0) {
        double lo = std::max(0.0, need - 0.3);
        fill[static_cast<std::size_t>(xr)] =
            static_cast<long>(std::floor((lo + (1 - lo) * uniform01(rng)) * static_cast<double>(len(xr))));
      }
      const double target = need + 0.02 * uniform01(rng);
      long want = static_cast<long>(std::ceil(target * static_cast<double>(width)));
      want -= (xl >= 0 ? fill[static_cast<std::size_t>(xl)] : 0) +
              (xr >= 0 ? fill[static_cast<std::size_t>(xr)] : 0);
      long y = std::clamp(want, 0L, len(ya));
      fill[static_cast<std::size_t>(ya)] = y;
      long extra = want - y;
      if (extra > 0 && xr >= 0) {
        long add = std::min(extra, len(xr) - fill[static_cast<std::size_t>(xr)]);
        fill[static_cast<std::size_t>(xr)] += add;
        extra -= add;
      }
      if (extra > 0) ok = false;
    }
    if (!ok) continue;

    std::vector<Interval> b_parts;
    for (long a = 0; a < atoms; ++a) {
      long f = fill[static_cast<std::size_t>(a)];
      if (f <= 0) continue;
      long off = uniform_int(rng, 0, len(a) - f);
      long lo = c[static_cast<std::size_t>(a)] + off;
      b_parts.emplace_back(unit(lo), unit(lo + f));
    }
    CoverSystem sys;
    sys.host = Interval(0, 1);
    sys.b = IntervalSet::from_unsorted(std::move(b_parts), true);
    for (long j = 1; j <= n; ++j) {
      long first = j > 1 ? 2 * j - 3 : 0;
      long last = j < n ? 2 * j - 1 : 2 * j - 2;
      sys.cover.emplace_back(unit(c[static_cast<std::size_t>(first)]),
                             unit(c[static_cast<std::size_t>(last + 1)]));
    }
    bool hypothesis = std::all_of(sys.cover.begin(), sys.cover.end(), [&](const Interval& iv) {
      return sys.b.measure_in(iv) / iv.length() >= exact_need;
    });
    if (!hypothesis) continue;

    const long extras = uniform_int(rng, 0, 3);
    for (long k = 0; k < extras; ++k) {
      long lo = uniform_int(rng, 0, kUnits - 2);
      long hi = uniform_int(rng, lo + 1, kUnits);
      Interval iv(unit(lo), unit(hi));
      if (sys.b.measure_in(iv) / iv.length() >= exact_need) sys.cover.push_back(iv);
    }
    for (std::size_t i = sys.cover.size(); i > 1; --i)
      std::swap(sys.cover[i - 1], sys.cover[uniform_below(rng, i)]);
    return sys;
  }
}

Lemma1Suite run_lemma1_suite(std::uint64_t trials, const Rational& delta, std::uint64_t seed) {
  auto run_range = [&](std::uint64_t begin, std::uint64_t end) {
    Lemma1Suite part;
    bool first = true;
    for (std::uint64_t t = begin; t < end; ++t) {
      auto rng = derived_stream(seed, t);
      auto sys = random_cover_system(rng, delta);
      auto rep = lemma1_check(sys, delta);
      ++part.trials;
      if (!rep.holds) ++part.violations;
      if (!rep.averaged_holds) ++part.averaged_violations;
      if (first || rep.slack() < part.min_slack) {
        part.min_slack = rep.slack();
        part.worst_trial = t;
        first = false;
      }
    }
    return part;
  };
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(std::thread::hardware_concurrency(), 1, std::max<std::uint64_t>(trials, 1));
  std::vector<std::future<Lemma1Suite>> parts;
  for (std::uint64_t w = 0; w < workers; ++w) {
    std::uint64_t begin = trials * w / workers, end = trials * (w + 1) / workers;
    parts.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_range,
                               begin, end));
  }
  Lemma1Suite total;
  bool first = true;
  for (auto& f : parts) {
    Lemma1Suite p = f.get();
    if (p.trials == 0) continue;
    total.trials += p.trials;
    total.violations += p.violations;
    total.averaged_violations += p.averaged_violations;
    // Merge in trial order, so ties keep the earliest trial.
    if (first || p.min_slack < total.min_slack) {
      total.min_slack = p.min_slack;
      total.worst_trial = p.worst_trial;
      first = false;
    }
  }
  return total;
}

// --------------------------------------------------------- proof machinery

const char* to_string(CheckKind k) { return k == CheckKind::Asserted ? "ASSERTED" : "DIAGNOSTIC"; }

bool ProofInspection::asserted_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) {
    return c.kind != CheckKind::Asserted || c.passed;
  });
}

const Check* ProofInspection::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

std::vector<ColoredEndpoint> color_all(const Configuration& c, const Rational& delta) {
  std::vector<ColoredEndpoint> out;
  for (const auto& e : c.endpoints()) {
    auto col = omega_and_color(density_profile(c, e), delta);
    if (!col) throw std::logic_error("endpoint " + to_string(e.value) + " has empty D_p in a counterexample");
    out.push_back(*col);
  }
  return out;
}

bool dichotomy(const ColoredEndpoint& ce) {
  const Rational& p = ce.endpoint.value;
  if (ce.color == Color::Black) return ce.omega_p < p || ce.omega_p >= 1 - p;
  return ce.omega_p < 1 - p || ce.omega_p >= p;
}

bool dichotomy_applies(const ColoredEndpoint& ce) {
  const Rational& p = ce.endpoint.value;
  return ce.color == Color::Black ? p <= kHalf : p >= kHalf;
}

/// Cover of component j by the balls and cells lying inside it.
CoverSystem component_system(const Interval& j, const std::vector<Interval>& balls,
                             const std::vector<Interval>& cells, IntervalSet b) {
  CoverSystem sys;
  sys.host = j;
  for (const auto& iv : balls)
    if (j.includes(iv)) sys.cover.push_back(iv);
  for (const auto& iv : cells)
    if (j.includes(iv)) sys.cover.push_back(iv);
  sys.b = std::move(b);
  return sys;
}

IntervalSet clip(const std::vector<Interval>& ivs, const Interval& j) {
  std::vector<Interval> parts;
  for (const auto& iv : ivs)
    if (iv.overlaps(j)) parts.emplace_back(std::max(iv.lo, j.lo), std::min(iv.hi, j.hi));
  return IntervalSet::from_unsorted(std::move(parts));
}

}  // namespace

ProofInspection proof_inspect(const Configuration& c, const Rational& delta) {
  if (delta <= 0 || delta >= kHalf) throw InspectionError("delta must lie in (0, 1/2)");
  Configuration cn = normalize(c);
  Rational ds = delta_star(cn);
  if (!(delta > ds))
    throw InspectionError("not a counterexample: delta " + to_string(delta) + " <= delta*(C) = " +
                          to_string(ds));

  ProofInspection insp{.delta = delta, .scale = 1 / c.last(), .config = cn, .delta_star = ds};
  insp.stats = all_extrema(cn);
  insp.colored = color_all(cn, delta);
  insp.rho = cn.finite_measure();
  const auto& col = insp.colored;
  auto& checks = insp.checks;
  const Rational one = 1;

  checks.push_back(make_check("color_zero_black", CheckKind::Asserted, col.front().color == Color::Black,
                              col.front().density_at_omega, ">=", 1 - delta,
                              std::string("endpoint 0 is ") + to_string(col.front().color)));
  checks.push_back(make_check("color_last_white", CheckKind::Asserted, col.back().color == Color::White,
                              col.back().density_at_omega, "<=", delta,
                              std::string("endpoint 1 is ") + to_string(col.back().color)));

  {
    std::vector<Rational> violators;
    std::size_t applicable = 0;
    for (const auto& ce : col) {
      if (!dichotomy_applies(ce)) continue;
      ++applicable;
      if (!dichotomy(ce)) violators.push_back(ce.endpoint.value);
    }
    Check ch;
    ch.name = "lemma2_dichotomy";
    ch.kind = CheckKind::Diagnostic;
    ch.passed = violators.empty();
    ch.lhs = std::to_string(violators.size());
    ch.relation = "==";
    ch.rhs = "0";
    ch.detail = std::to_string(applicable) + " endpoints checked" +
                (violators.empty() ? std::string() : "; violated at " + join_values(violators));
    checks.push_back(std::move(ch));
  }

  for (const auto& ce : col) {
    const Rational& v = ce.endpoint.value;
    if (ce.color == Color::Black && v <= kHalf && ce.omega_p >= 1 - v)
      if (!insp.v_black || v > *insp.v_black) insp.v_black = v;
    // Mirror image of the black condition; see README.
    if (ce.color == Color::White && v >= kHalf && ce.omega_p >= v)
      if (!insp.v_white || v < *insp.v_white) insp.v_white = v;
  }
  if (!insp.v_black || !insp.v_white) {
    insp.reason = !insp.v_black ? "v_B undefined: no black v <= 1/2 with omega(v) >= 1 - v"
                                : "v_W undefined: no white v >= 1/2 with omega(v) >= v";
    return insp;
  }
  const Rational& vb = *insp.v_black;
  const Rational& vw = *insp.v_white;
  insp.i_circ = Interval(vb, vw);
  const Rational circ = vw - vb;

  checks.push_back(make_check("lemma3_black", CheckKind::Asserted, (1 - insp.rho) / (2 * (1 - vb)) <= delta,
                              (1 - insp.rho) / (2 * (1 - vb)), "<=", delta, "(1-rho)/(2(1-v_B))"));
  checks.push_back(make_check("lemma3_white", CheckKind::Asserted, insp.rho / (2 * vw) <= delta,
                              insp.rho / (2 * vw), "<=", delta, "rho/(2 v_W)"));

  std::vector<Interval> black_balls, white_balls;
  for (const auto& ce : col) {
    const Rational& v = ce.endpoint.value;
    if (!(vb < v && v < vw)) continue;
    insp.f.push_back(ce.endpoint);
    Rational m = mu(insp.stats[ce.endpoint.index], ce.color);
    insp.mu_map.emplace(ce.endpoint.index, m);
    (ce.color == Color::Black ? black_balls : white_balls).push_back(ball(v, m));
  }

  {
    std::vector<Rational> bad;
    Rational worst = 0;  // most negative margin min(p - μ, 1 - p - μ)
    bool first = true;
    for (const auto& e : insp.f) {
      const Rational& m = insp.mu_map.at(e.index);
      Rational margin = std::min(Rational(e.value - m), Rational(1 - e.value - m));
      if (first || margin < worst) {
        worst = margin;
        first = false;
      }
      if (margin < 0) bad.push_back(e.value);
    }
    if (insp.f.empty())
      checks.push_back(skipped("cimp", CheckKind::Asserted, "F is empty"));
    else
      checks.push_back(make_check("cimp", CheckKind::Asserted, bad.empty(), worst, ">=", Rational(0),
                                  "min over F of min(p - mu, 1 - p - mu)" +
                                      (bad.empty() ? std::string() : "; fails at " + join_values(bad))));
  }

  // Φ sets.
  const auto& ivs = cn.intervals();
  std::vector<Interval> gaps;
  {
    Rational prev = 0;
    for (const auto& iv : ivs) {
      gaps.emplace_back(prev, iv.lo);
      prev = iv.hi;
    }
  }
  insp.phi_black1 = IntervalSet::from_unsorted(black_balls);
  insp.phi_white1 = IntervalSet::from_unsorted(white_balls);
  std::vector<Interval> b2, w2;
  for (const auto& iv : ivs)
    if (std::any_of(black_balls.begin(), black_balls.end(), [&](const Interval& b) { return b.overlaps(iv); }))
      b2.push_back(iv);
  for (const auto& g : gaps)
    if (std::any_of(white_balls.begin(), white_balls.end(), [&](const Interval& b) { return b.overlaps(g); }))
      w2.push_back(g);
  insp.phi_black2 = IntervalSet::from_unsorted(b2);
  insp.phi_white2 = IntervalSet::from_unsorted(w2);
  insp.phi_black = insp.phi_black1.unite(insp.phi_black2);
  insp.phi_white = insp.phi_white1.unite(insp.phi_white2);
  const IntervalSet both = insp.phi_black.unite(insp.phi_white);
  const Interval unit(0, one);

  if (insp.f.empty()) {
    checks.push_back(skipped("icircin_cover", CheckKind::Asserted, "F is empty"));
  } else {
    checks.push_back(make_check("icircin_cover", CheckKind::Asserted, both.covers(*insp.i_circ),
                                both.measure_in(*insp.i_circ), ">=", circ,
                                "I_circ covered by Phi_B ∪ Phi_W"));
  }
  checks.push_back(make_check("icircin_inside", CheckKind::Asserted, both.is_subset_of(unit),
                              both.empty() ? Rational(0) : both.parts().front().lo, ">=", Rational(0),
                              "Phi_B ∪ Phi_W inside (0,1); upper end " +
                                  (both.empty() ? std::string("-") : to_string(both.parts().back().hi))));

  {
    std::set<Rational> lefts, rights, gap_lefts{Rational(0)};
    for (const auto& iv : ivs) {
      lefts.insert(iv.lo);
      rights.insert(iv.hi);
      gap_lefts.insert(iv.hi);
    }
    std::size_t bad_b = 0, bad_w = 0;
    for (const auto& j : insp.phi_black.parts())
      if (!lefts.count(j.lo) || !rights.count(j.hi)) ++bad_b;
    for (const auto& j : insp.phi_white.parts())
      if (!gap_lefts.count(j.lo) || !lefts.count(j.hi)) ++bad_w;
    Check cb = make_check("mainlemma1_black", CheckKind::Asserted, bad_b == 0, Rational(static_cast<long>(bad_b)),
                          "==", Rational(0), "Phi_B components of the form (a_i, b_j)");
    Check cw = make_check("mainlemma1_white", CheckKind::Asserted, bad_w == 0, Rational(static_cast<long>(bad_w)),
                          "==", Rational(0), "Phi_W components of the form (b_i, a_j), b_0 = 0");
    checks.push_back(std::move(cb));
    checks.push_back(std::move(cw));
  }

  {
    // Well-formedness: Φ_2 parts are cells of C, Φ_1 ⊂ Φ, and the Lemma 1
    // hypothesis holds on every component's cover (so the lemma applies).
    bool ok = true;
    std::string why;
    for (const auto& j : insp.phi_black.parts()) {
      auto sys = component_system(j, black_balls, b2, clip(ivs, j));
      try {
        auto rep = lemma1_check(sys, delta);
        if (!rep.holds) {
          ok = false;
          why += "lemma1 fails on black component; ";
        }
      } catch (const HypothesisError& e) {
        ok = false;
        why += std::string("black component: ") + e.what() + "; ";
      }
    }
    for (const auto& j : insp.phi_white.parts()) {
      auto sys = component_system(j, white_balls, w2, complement_in(cn, j));
      try {
        auto rep = lemma1_check(sys, delta);
        if (!rep.holds) {
          ok = false;
          why += "lemma1 fails on white component; ";
        }
      } catch (const HypothesisError& e) {
        ok = false;
        why += std::string("white component: ") + e.what() + "; ";
      }
    }
    Check ch;
    ch.name = "phi_wellformed";
    ch.kind = CheckKind::Asserted;
    ch.passed = ok;
    ch.lhs = std::to_string(insp.phi_black.size()) + "+" + std::to_string(insp.phi_white.size());
    ch.relation = "components";
    ch.rhs = "-";
    ch.detail = ok ? "every component satisfies the Lemma 1 hypothesis and bound" : why;
    checks.push_back(std::move(ch));
  }

  // Diagnostics that rely on minimality.
  {
    std::size_t crossing = 0;
    for (const auto& jb : insp.phi_black.parts())
      for (const auto& jw : insp.phi_white.parts()) {
        bool disjoint = jb.hi <= jw.lo || jw.hi <= jb.lo;
        if (!disjoint && !jb.includes(jw) && !jw.includes(jb)) ++crossing;
      }
    checks.push_back(make_check("mainlemma2_laminar", CheckKind::Diagnostic, crossing == 0,
                                Rational(static_cast<long>(crossing)), "==", Rational(0),
                                "crossing (J_B, J_W) pairs"));
  }
  {
    auto inside_one = [&](const IntervalSet& s) {
      return std::any_of(s.parts().begin(), s.parts().end(),
                         [&](const Interval& j) { return j.includes(*insp.i_circ); });
    };
    bool in_b = inside_one(insp.phi_black), in_w = inside_one(insp.phi_white);
    Check ch;
    ch.name = "corollary";
    ch.kind = CheckKind::Diagnostic;
    ch.passed = in_b || in_w;
    ch.lhs = in_b ? "Phi_B" : (in_w ? "Phi_W" : "none");
    ch.relation = "contains";
    ch.rhs = "I_circ";
    checks.push_back(std::move(ch));
  }
  {
    const Rational k = (1 - delta) / (1 + delta);
    bool upper = insp.rho >= k * circ;
    bool lower = insp.rho <= (1 - k) * circ;
    Check ch = make_check("prop4", CheckKind::Diagnostic, upper || lower, insp.rho,
                          upper ? ">=" : "<=", upper ? Rational(k * circ) : Rational((1 - k) * circ),
                          upper ? "first branch" : (lower ? "second branch" : "neither branch"));
    checks.push_back(std::move(ch));
  }
  checks.push_back(make_check("penult", CheckKind::Diagnostic, circ >= 1 / (2 * delta) - 1, circ, ">=",
                              1 / (2 * delta) - 1, "|I_circ| >= 1/(2 delta) - 1"));
  checks.push_back(make_check("small", CheckKind::Diagnostic, insp.rho <= 2 * delta, insp.rho, "<=",
                              2 * delta, "rho <= 2 delta"));
  {
    std::size_t fails = 0;
    Rational worst = 1;
    for (const auto& j : insp.phi_black.parts()) {
      auto sys = component_system(j, black_balls, b2, clip(ivs, j));
      try {
        auto rep = remark5_experiment(sys, delta);
        if (!rep.holds) ++fails;
        if (rep.density - rep.bound < worst) worst = rep.density - rep.bound;
      } catch (const HypothesisError&) {
        ++fails;
      }
    }
    checks.push_back(make_check("remark5_phi_black", CheckKind::Diagnostic, fails == 0, worst, ">=",
                                Rational(0), "min over Phi_B components of density - 1/(1+2 delta)"));
  }
  if (!insp.find("lemma2_dichotomy")->passed) {
    for (auto& ch : checks) {
      if (ch.kind != CheckKind::Asserted || ch.passed) continue;
      if (ch.name == "cimp" || ch.name.rfind("icircin", 0) == 0 || ch.name.rfind("mainlemma1", 0) == 0 ||
          ch.name == "phi_wellformed")
        ch.detail += "; relies on the Lemma 2 dichotomy, which fails for this configuration";
    }
  }
  insp.complete = true;
  return insp;
}

Lemma2Report lemma2_probe(const Configuration& c, const Rational& delta, const Endpoint& p) {
  if (delta <= 0 || delta >= kHalf) throw InspectionError("delta must lie in (0, 1/2)");
  Configuration cn = normalize(c);
  if (!(delta > delta_star(cn))) throw InspectionError("not a counterexample at this delta");
  Endpoint ep = require_endpoint(cn, Endpoint{p.value / c.last(), p.kind, p.index});
  auto col = omega_and_color(cn, ep, delta);
  if (!col) throw std::logic_error("empty D_p in a counterexample");

  Lemma2Report rep;
  rep.endpoint = ep;
  rep.color = col->color;
  Configuration work = cn;
  Endpoint wp = ep;
  if (col->color == Color::Black && ep.value <= kHalf) {
  } else if (col->color == Color::White && ep.value >= kHalf) {
    rep.mirrored = true;
    work = mirror(cn);
    wp = *work.find_endpoint(1 - ep.value);
  } else {
    throw InspectionError("lemma2_probe needs a black endpoint <= 1/2 or a white endpoint >= 1/2");
  }
  auto colored = color_all(work, delta);
  const ColoredEndpoint& wc = colored[wp.index];
  if (wc.color != Color::Black) throw std::logic_error("mirroring did not swap the color");
  rep.omega_p = wc.omega_p;
  rep.dichotomy_holds = wc.omega_p < wp.value || wc.omega_p >= 1 - wp.value;
  if (rep.dichotomy_holds) return rep;

  rep.truncated = true;
  rep.cut = wp.value + wc.omega_p;
  rep.cut_in_gap_closure = !work.contains(rep.cut);
  try {
    rep.truncated_config = truncate_at(work, rep.cut);
  } catch (const ConfigurationError&) {
    return rep;
  }
  rep.truncated_is_counterexample = is_counterexample(*rep.truncated_config, delta).refutes;
  for (const auto& ce : colored) {
    const Rational& v = ce.endpoint.value;
    if (ce.color != Color::Black || !(v < rep.cut) || !(v + ce.omega_p > rep.cut)) continue;
    Lemma2Claim claim;
    claim.v = v;
    claim.omega_v = ce.omega_p;
    claim.gap_density = work.rel_measure(Interval(rep.cut, v + ce.omega_p));
    claim.gap_ok = claim.gap_density < 1 - 2 * delta;
    claim.new_density = rep.truncated_config->rel_measure(ball(v, rep.cut - v));
    claim.new_ok = claim.new_density > 1 - delta;
    rep.claims.push_back(std::move(claim));
  }
  return rep;
}

ChainReport final_inequality_chain(const ProofInspection& insp) {
  if (!insp.complete) throw InspectionError("inequality chain needs a complete inspection");
  const Rational& d = insp.delta;
  const Rational& rho = insp.rho;
  const Rational vb = *insp.v_black, vw = *insp.v_white;
  const Rational circ = vw - vb;
  const Rational k = (1 - d) / (1 + d);
  const Rational target = 1 / (2 * d) - 1;
  ChainReport rep;
  auto step = [&](std::string name, Rational lhs, Rational rhs) {
    ChainStep s{std::move(name), std::move(lhs), std::move(rhs)};
    s.holds = s.lhs >= s.rhs;
    rep.steps.push_back(std::move(s));
  };
  step("onerho_black: 2 delta (1 - v_B) >= 1 - rho", 2 * d * (1 - vb), 1 - rho);
  step("onerho_white: 2 delta v_W >= rho", 2 * d * vw, rho);
  step("penult: |I_circ| >= 1/(2 delta) - 1", circ, target);
  step("small: 2 delta >= rho", 2 * d, rho);
  step("prop4: rho >= k |I_circ|", rho, k * circ);
  step("penult scaled: k |I_circ| >= k (1/(2 delta) - 1)", k * circ, k * target);
  step("final: 2 delta >= k (1/(2 delta) - 1)", 2 * d, k * target);
  rep.polynomial = lower_bound_polynomial(d);
  rep.polynomial_at_least_one = rep.polynomial >= 1;
  return rep;
}

}  // namespace dlab
