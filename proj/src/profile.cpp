#include "densitylab/profile.hpp"

#include <algorithm>

#include "densitylab/sweep.hpp"

namespace dlab {
namespace {

Rational density_of(const BigInt& mass, const BigInt& radius) {
  Rational q(mass, 2 * radius);
  q.canonicalize();
  return q;
}

Rational unscale(const BigInt& v, const BigInt& scale) {
  Rational q(v, scale);
  q.canonicalize();
  return q;
}

const Rational kHalf = make_rational(1, 2);

}  // namespace

Rational ProfilePiece::density(const Rational& omega) const {
  return make_rational(slope_count, 2) + offset / (2 * omega);
}

Rational DensityProfile::density(const Rational& omega) const {
  if (omega <= 0) throw ProfileError("density radius must be positive");
  for (const auto& piece : pieces)
    if (omega <= piece.omega_hi) return piece.density(omega);
  return make_rational(terminal_slope, 2) + terminal_offset / (2 * omega);
}

const char* to_string(Color c) { return c == Color::Black ? "black" : "white"; }

ScaledEndpoints scale_to_integers(const Configuration& c) {
  ScaledEndpoints out;
  out.scale = 1;
  for (const auto& iv : c.intervals()) {
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), iv.lo.get_den_mpz_t());
    mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), iv.hi.get_den_mpz_t());
  }
  auto values = c.endpoint_values();
  out.pts.reserve(values.size());
  for (const auto& v : values) out.pts.push_back(v.get_num() * (out.scale / v.get_den()));
  return out;
}

Endpoint require_endpoint(const Configuration& c, const Endpoint& p) {
  auto found = c.find_endpoint(p.value);
  if (!found) throw ProfileError(to_string(p.value) + " is not an endpoint of the configuration");
  return *found;
}

DensityProfile density_profile(const Configuration& c, const Endpoint& p) {
  DensityProfile prof;
  prof.endpoint = require_endpoint(c, p);
  auto scaled = scale_to_integers(c);
  BigInt lo_radius = 0, lo_mass = 0;
  int terminal = sweep::for_each_breakpoint<BigInt>(
      scaled.pts, prof.endpoint.index,
      [&](const BigInt& w, const BigInt& m, int slope_before, int) {
        ProfilePiece piece;
        piece.omega_lo = unscale(lo_radius, scaled.scale);
        piece.omega_hi = unscale(w, scaled.scale);
        piece.slope_count = slope_before;
        piece.offset = unscale(lo_mass - slope_before * lo_radius, scaled.scale);
        prof.pieces.push_back(std::move(piece));
        lo_radius = w;
        lo_mass = m;
        return true;
      });
  prof.terminal_slope = terminal;
  prof.terminal_offset = unscale(lo_mass - terminal * lo_radius, scaled.scale);
  return prof;
}

namespace {

EndpointStats stats_from(const Endpoint& p, const sweep::BreakpointExtrema<BigInt>& ex,
                         const BigInt& scale) {
  EndpointStats s;
  s.endpoint = p;
  if (ex.has_sup) {
    s.sup_density = density_of(ex.sup_mass, ex.sup_radius);
    s.sup_radius = unscale(ex.sup_radius, scale);
  } else {
    s.sup_density = kHalf;
  }
  if (ex.has_inf) {
    s.inf_density = density_of(ex.inf_mass, ex.inf_radius);
    s.inf_radius = unscale(ex.inf_radius, scale);
  } else {
    s.inf_density = kHalf;
  }
  Rational low_escape = 1 - s.inf_density;
  s.escape = s.sup_density > low_escape ? s.sup_density : low_escape;
  return s;
}

}  // namespace

EndpointStats profile_extrema(const Configuration& c, const Endpoint& p) {
  Endpoint e = require_endpoint(c, p);
  auto scaled = scale_to_integers(c);
  auto ex = sweep::breakpoint_extrema<BigInt>(scaled.pts, e.index);
  return stats_from(e, ex, scaled.scale);
}

std::vector<EndpointStats> all_extrema(const Configuration& c) {
  auto scaled = scale_to_integers(c);
  std::vector<EndpointStats> out;
  out.reserve(scaled.pts.size());
  for (std::size_t j = 0; j < scaled.pts.size(); ++j)
    out.push_back(stats_from(c.endpoint(j), sweep::breakpoint_extrema<BigInt>(scaled.pts, j),
                             scaled.scale));
  return out;
}

std::pair<Rational, std::size_t> delta_star_with_argmin(const Configuration& c) {
  auto scaled = scale_to_integers(c);
  auto [e, arg] = sweep::min_escape<BigInt>(scaled.pts);
  Rational escape(e.num, e.den);
  escape.canonicalize();
  return {1 - escape, arg};
}

Rational delta_star(const Configuration& c) { return delta_star_with_argmin(c).first; }

CounterexampleDecision is_counterexample(const Configuration& c, const Rational& delta) {
  if (delta <= 0 || delta > kHalf) throw ProfileError("delta must lie in (0, 1/2]");
  auto scaled = scale_to_integers(c);
  // density < δ  <=>  mass * den(δ) < 2 * num(δ) * radius, similarly for > 1 - δ.
  const BigInt dn = delta.get_num();
  const BigInt dd = delta.get_den();
  CounterexampleDecision out;
  out.refutes = true;
  for (std::size_t j = 0; j < scaled.pts.size(); ++j) {
    bool found = false;
    sweep::for_each_breakpoint<BigInt>(scaled.pts, j, [&](const BigInt& w, const BigInt& m, int, int) {
      BigInt lhs = m * dd;
      BigInt low = 2 * dn * w;
      BigInt high = 2 * (dd - dn) * w;
      if (lhs < low || lhs > high) {
        out.witnesses.emplace(j, unscale(w, scaled.scale));
        found = true;
        return false;
      }
      return true;
    });
    if (!found) out.refutes = false;
  }
  return out;
}

namespace {

// sup{ω ∈ [lo, hi] : sign * ((slope - 2t) ω + c) >= 0}, hi = nullopt means +inf.
// With sign = +1 this is {density >= t}; with sign = -1 it is {density <= t}.
std::optional<Rational> piece_sup(const Rational& lo, const std::optional<Rational>& hi, int slope,
                                  const Rational& offset, const Rational& t, int sign) {
  Rational k = sign * (slope - 2 * t);
  Rational c = sign * offset;
  // condition: k ω + c >= 0
  if (k == 0) {
    if (c >= 0) return hi;  // nullopt here would mean unbounded, never produced by valid profiles
    return std::nullopt;
  }
  Rational root = -c / k;
  if (k > 0) {
    // holds for ω >= root
    if (hi && root > *hi) return std::nullopt;
    return hi;
  }
  // holds for ω <= root
  if (root < lo) return std::nullopt;
  if (hi && *hi < root) return hi;
  return root;
}

std::optional<Rational> last_radius(const DensityProfile& prof, const Rational& t, int sign) {
  auto terminal = piece_sup(prof.horizon(), std::nullopt, prof.terminal_slope,
                            prof.terminal_offset, t, sign);
  if (terminal) return terminal;
  for (auto it = prof.pieces.rbegin(); it != prof.pieces.rend(); ++it) {
    auto r = piece_sup(it->omega_lo, it->omega_hi, it->slope_count, it->offset, t, sign);
    if (r && *r > 0) return r;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ColoredEndpoint> omega_and_color(const DensityProfile& prof, const Rational& delta) {
  if (delta <= 0 || delta >= kHalf) throw ProfileError("delta must lie in (0, 1/2)");
  ColoredEndpoint out;
  out.endpoint = prof.endpoint;
  out.omega_high = last_radius(prof, 1 - delta, +1);
  out.omega_low = last_radius(prof, delta, -1);
  if (!out.omega_high && !out.omega_low) return std::nullopt;
  if (out.omega_high && (!out.omega_low || *out.omega_low <= *out.omega_high)) {
    out.omega_p = *out.omega_high;
    out.color = Color::Black;
  } else {
    out.omega_p = *out.omega_low;
    out.color = Color::White;
  }
  out.density_at_omega = prof.density(out.omega_p);
  return out;
}

std::optional<ColoredEndpoint> omega_and_color(const Configuration& c, const Endpoint& p,
                                               const Rational& delta) {
  return omega_and_color(density_profile(c, p), delta);
}

Rational mu(const EndpointStats& stats, Color color) {
  const auto& radius = color == Color::Black ? stats.sup_radius : stats.inf_radius;
  if (!radius)
    throw ProfileError("extremal density at " + to_string(stats.endpoint.value) +
                       " is the unattained limit 1/2");
  return *radius;
}

Rational mu(const Configuration& c, const Endpoint& p, Color color) {
  return mu(profile_extrema(c, p), color);
}

Endpoint quarter_point(const Configuration& c) {
  // f(e_k) = λ(C ∩ (e_k, ∞)) + e_k/2, accumulated from the right.
  auto values = c.endpoint_values();
  std::vector<Rational> tail(values.size());
  Rational acc = 0;
  for (std::size_t k = values.size(); k-- > 0;) {
    tail[k] = acc;
    if (k > 0 && k % 2 == 0) acc += values[k] - values[k - 1];
  }
  std::size_t best = 0;
  Rational best_f = tail[0] + values[0] / 2;
  for (std::size_t k = 1; k < values.size(); ++k) {
    Rational f = tail[k] + values[k] / 2;
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  return c.endpoint(best);
}

void write_profile_csv(std::ostream& out, const DensityProfile& prof, int interior_samples) {
  out << "omega,density\n";
  auto emit = [&](const Rational& w) { out << to_string(w) << ',' << to_string(prof.density(w)) << '\n'; };
  auto samples = [&](const Rational& lo, const Rational& hi) {
    for (int s = 1; s <= interior_samples; ++s)
      emit(lo + (hi - lo) * make_rational(s, interior_samples + 1));
  };
  for (const auto& piece : prof.pieces) {
    samples(piece.omega_lo, piece.omega_hi);
    emit(piece.omega_hi);
  }
  samples(prof.horizon(), 2 * prof.horizon());
  emit(2 * prof.horizon());
}

}  // namespace dlab
