#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "densitylab/configuration.hpp"

namespace dlab {

/// On [omega_lo, omega_hi] the density is slope_count/2 + offset/(2ω).
struct ProfilePiece {
  Rational omega_lo;
  Rational omega_hi;
  int slope_count = 0;
  Rational offset;

  Rational density(const Rational& omega) const;
};

/// ω ↦ λ(C | I_ω(p)) for one endpoint. `pieces` cover (0, Ω] where Ω is the
/// distance to the farthest endpoint; beyond Ω the density is
/// terminal_slope/2 + terminal_offset/(2ω), tending to 1/2.
struct DensityProfile {
  Endpoint endpoint;
  std::vector<ProfilePiece> pieces;
  int terminal_slope = 1;
  Rational terminal_offset;

  const Rational& horizon() const { return pieces.back().omega_hi; }
  Rational density(const Rational& omega) const;
};

/// Extremes of the density over ω ∈ (0, ∞). A missing radius means the value
/// is only the limit 1/2 (at 0+ and at infinity), not attained beyond it.
struct EndpointStats {
  Endpoint endpoint;
  Rational sup_density;
  Rational inf_density;
  std::optional<Rational> sup_radius;
  std::optional<Rational> inf_radius;
  Rational escape;  // max(sup, 1 - inf)
};

enum class Color { Black, White };
const char* to_string(Color c);

struct ColoredEndpoint {
  Endpoint endpoint;
  Rational omega_p;  // sup D_p
  Color color = Color::Black;
  Rational density_at_omega;
  /// sup{ω : density ≥ 1-δ} and sup{ω : density ≤ δ}, when nonempty.
  std::optional<Rational> omega_high;
  std::optional<Rational> omega_low;

  bool two_sided() const { return omega_high.has_value() && omega_low.has_value(); }
};

struct CounterexampleDecision {
  bool refutes = false;
  /// endpoint index -> smallest breakpoint radius whose density leaves [δ, 1-δ]
  std::map<std::size_t, Rational> witnesses;
};

/// Scaled integer form of a configuration: pts[k] = endpoint_k * scale.
struct ScaledEndpoints {
  std::vector<BigInt> pts;
  BigInt scale;
};
ScaledEndpoints scale_to_integers(const Configuration& c);

DensityProfile density_profile(const Configuration& c, const Endpoint& p);
EndpointStats profile_extrema(const Configuration& c, const Endpoint& p);
std::vector<EndpointStats> all_extrema(const Configuration& c);

/// 1 - min over endpoints of the escape score.
Rational delta_star(const Configuration& c);
/// Also reports the smallest endpoint index attaining the minimum escape.
std::pair<Rational, std::size_t> delta_star_with_argmin(const Configuration& c);

CounterexampleDecision is_counterexample(const Configuration& c, const Rational& delta);

std::optional<ColoredEndpoint> omega_and_color(const Configuration& c, const Endpoint& p,
                                               const Rational& delta);
std::optional<ColoredEndpoint> omega_and_color(const DensityProfile& profile,
                                               const Rational& delta);

struct ProfileError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Smallest radius attaining the maximal (Black) or minimal (White) density.
/// Throws ProfileError when that extremum is only the limit 1/2.
Rational mu(const Configuration& c, const Endpoint& p, Color color);
Rational mu(const EndpointStats& stats, Color color);

/// Minimizer of f(x) = λ(C ∩ (x, ∞)) + x/2 over the endpoints; ties go to the
/// smallest endpoint.
Endpoint quarter_point(const Configuration& c);

/// CSV with header `omega,density`, one row per breakpoint plus
/// `interior_samples` evenly spaced rows inside each piece. The terminal piece
/// is sampled on [Ω, 2Ω].
void write_profile_csv(std::ostream& out, const DensityProfile& profile, int interior_samples = 0);

/// Checks that p is an endpoint of c (value match) and returns the canonical one.
Endpoint require_endpoint(const Configuration& c, const Endpoint& p);

}  // namespace dlab
