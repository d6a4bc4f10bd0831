#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "densitylab/configuration.hpp"
#include "densitylab/constructions.hpp"

namespace dlab {

/// Stick-breaking encoding of 0 < a_1 < b_1 < ... < b_r = 1: coords holds the
/// logs of the 2r positive increments between consecutive endpoints.
struct ParamVector {
  int r = 0;
  Eigen::VectorXd coords;
};

/// Smallest normalized increment; smaller ones are raised to it.
inline constexpr double kIncrementFloor = 1e-9;

/// Endpoints {0, a_1, ..., b_r} with b_r = 1 exactly.
std::vector<double> decode_points(const ParamVector& v);
ParamVector encode(const Configuration& c);
/// The decoded endpoints taken as exact binary rationals.
Configuration to_configuration(const ParamVector& v);

/// Float δ* of the decoded configuration (same sweep as the exact path).
double objective(const ParamVector& v);
double float_delta_star(const std::vector<double>& pts);

struct PrecisionIncident {
  std::size_t restart = 0;
  std::size_t iteration = 0;
  double float_value = 0;
  Rational exact_value;
};

struct SearchOptions {
  int r = 1;
  std::size_t restarts = 1;
  std::size_t iters = 1000;
  std::uint64_t seed = 0;
  std::optional<Configuration> init;  // overrides r when set
  double initial_step = 0.1;          // simplex edge in log-increment space
  double init_jitter = 0.1;           // restarts > 0 perturb `init` by this much
};

struct RestartTrace {
  std::size_t restart = 0;
  std::vector<double> incumbent;  // certified incumbent after each iteration
};

struct SearchResult {
  ParamVector best_params;
  double float_objective = 0;
  Rational exact_objective;
  Configuration best_config = Configuration::make(std::vector<Interval>{Interval(make_rational(1, 2), 1)});
  std::size_t best_restart = 0;
  std::vector<RestartTrace> trace;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;  // per restart
  std::size_t certifications = 0;
  std::vector<PrecisionIncident> incidents;

  double certification_gap() const { return std::abs(float_objective - to_double(exact_objective)); }
};

/// Certified values below this are impossible and abort the search.
Rational theorem_floor();

/// Multi-start Nelder-Mead. Restart k uses derived_stream(seed, k); the
/// outcome does not depend on how restarts are scheduled.
SearchResult search(const SearchOptions& options);

struct NeighborhoodSample {
  double m = 0, s = 0;
  double worst = 0;  // max(1/m - s, sm, 1/s - 1)
  double min_escape = 0;  // 1 - worst/2
};

struct NeighborhoodAudit {
  NeighborhoodSample center;
  double first_row = 0, last_row = 0, other_rows = 0;  // 1/m - s, sm, 1/s - 1 at the center
  double spread = 0;                                    // max minus min of the three
  std::vector<NeighborhoodSample> samples;
  bool center_is_max = false;  // every sample has a strictly smaller min_escape
};

NeighborhoodSample neighborhood_sample(double m, double s);
/// Samples `directions` points on the circle of the given radius around (m, s).
NeighborhoodAudit neighborhood_audit(const CmsnParams& params, double radius, int directions = 64);

}  // namespace dlab
