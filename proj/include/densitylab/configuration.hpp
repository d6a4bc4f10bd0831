#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densitylab/rational.hpp"

namespace dlab {

struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Open interval (lo, hi).
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo < x && x < hi; }
  /// Closure containment: other ⊆ this as open sets.
  bool includes(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool overlaps(const Interval& other) const { return lo < other.hi && other.lo < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Symmetric neighbourhood I_radius(center).
Interval ball(const Rational& center, const Rational& radius);

/// λ((lo,hi) ∩ (a,b)).
Rational overlap_length(const Interval& a, const Interval& b);

/// Finite union of pairwise disjoint open intervals, sorted, no ray.
/// Touching parts are kept separate: (0,1) ∪ (1,2) misses the point 1.
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Merges overlapping inputs; touching inputs merge only when `merge_touching`.
  static IntervalSet from_unsorted(std::vector<Interval> parts, bool merge_touching = false);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }

  Rational measure() const;
  Rational measure_in(const Interval& window) const;
  /// Every point of `window` lies in some part.
  bool covers(const Interval& window) const;
  bool is_subset_of(const Interval& host) const;
  IntervalSet unite(const IntervalSet& other) const;
  bool contains(const Rational& x) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> parts_;
};

enum class EndpointKind { Zero, Left, Right };

/// 0, or one of the a_i / b_i of a configuration. `index` is the position in
/// the sorted endpoint list {0, a_1, b_1, ..., a_r, b_r}.
struct Endpoint {
  Rational value;
  EndpointKind kind = EndpointKind::Zero;
  std::size_t index = 0;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

const char* to_string(EndpointKind kind);

/// The ray (-inf, 0) together with finitely many disjoint open intervals
/// 0 < a_1 < b_1 < ... < a_r < b_r. The ray is implicit.
class Configuration {
 public:
  /// Validates, sorts and merges touching intervals.
  static Configuration make(std::vector<std::pair<Rational, Rational>> raw);
  static Configuration make(std::vector<Interval> raw);

  const std::vector<Interval>& intervals() const { return intervals_; }
  std::size_t interval_count() const { return intervals_.size(); }
  /// Sorted {0, a_1, b_1, ..., a_r, b_r}.
  std::vector<Rational> endpoint_values() const;
  std::vector<Endpoint> endpoints() const;
  std::size_t endpoint_count() const { return 2 * intervals_.size() + 1; }
  Endpoint endpoint(std::size_t index) const;
  /// Endpoint with this value, if any.
  std::optional<Endpoint> find_endpoint(const Rational& value) const;
  const Rational& last() const { return intervals_.back().hi; }

  /// λ(C ∩ window), including the ray.
  Rational measure_in(const Interval& window) const;
  /// λ(C ∩ window) / |window|.
  Rational rel_measure(const Interval& window) const;
  /// λ(C ∩ (0, ∞)).
  Rational finite_measure() const;
  /// The finite part C ∩ (0, ∞) as an interval set.
  IntervalSet finite_part() const;
  /// Point membership (endpoints are not members).
  bool contains(const Rational& x) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  explicit Configuration(std::vector<Interval> iv) : intervals_(std::move(iv)) {}
  std::vector<Interval> intervals_;
};

Configuration make_configuration(std::vector<std::pair<Rational, Rational>> raw);

/// Multiplies every finite endpoint by `scale` (> 0).
Configuration affine_image(const Configuration& c, const Rational& scale);

/// Rescales so that b_r = 1.
Configuration normalize(const Configuration& c);

/// C \ (x, ∞). Throws when no interval survives.
Configuration truncate_at(const Configuration& c, const Rational& x);

enum class ReflectMode { Forward, Reflected };

/// Forward:   ((-inf, lo) ∪ (C ∩ (lo, hi))) - lo
/// Reflected: hi - ((hi, inf) ∪ (C ∩ (lo, hi)))
/// lo and hi must be endpoints of C; a result whose first interval touches
/// the ray is degenerate and rejected.
Configuration reflect_truncate(const Configuration& c, const Rational& lo, const Rational& hi,
                               ReflectMode mode);

/// The finite pieces reflect_truncate would produce, before validation.
std::vector<Interval> reflect_truncate_pieces(const Configuration& c, const Rational& lo,
                                              const Rational& hi, ReflectMode mode);

/// For b_r = 1: the configuration 1 - closure(complement), i.e. gaps reflected
/// through 1/2. Densities satisfy λ(mirror|I_w(1-p)) = 1 - λ(C|I_w(p)).
Configuration mirror(const Configuration& c);

}  // namespace dlab
