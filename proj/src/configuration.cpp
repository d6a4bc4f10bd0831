#include "densitylab/configuration.hpp"

#include <algorithm>

namespace dlab {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (!(lo < hi))
    throw ConfigurationError("interval needs lo < hi, got (" + to_string(lo) + ", " +
                             to_string(hi) + ")");
}

Interval ball(const Rational& center, const Rational& radius) {
  return Interval(center - radius, center + radius);
}

Rational overlap_length(const Interval& a, const Interval& b) {
  const Rational& lo = a.lo > b.lo ? a.lo : b.lo;
  const Rational& hi = a.hi < b.hi ? a.hi : b.hi;
  return lo < hi ? Rational(hi - lo) : Rational(0);
}

// ---------------------------------------------------------------- IntervalSet

IntervalSet IntervalSet::from_unsorted(std::vector<Interval> parts, bool merge_touching) {
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  IntervalSet out;
  for (auto& iv : parts) {
    if (!out.parts_.empty()) {
      Interval& back = out.parts_.back();
      bool joins = merge_touching ? iv.lo <= back.hi : iv.lo < back.hi;
      if (joins) {
        if (iv.hi > back.hi) back.hi = iv.hi;
        continue;
      }
    }
    out.parts_.push_back(std::move(iv));
  }
  return out;
}

Rational IntervalSet::measure() const {
  Rational total = 0;
  for (const auto& iv : parts_) total += iv.length();
  return total;
}

Rational IntervalSet::measure_in(const Interval& window) const {
  Rational total = 0;
  for (const auto& iv : parts_) {
    if (iv.lo >= window.hi) break;
    total += overlap_length(iv, window);
  }
  return total;
}

bool IntervalSet::covers(const Interval& window) const {
  // Sweep: `reach` is the first point of the window not yet known covered.
  // The window's own lo is not a member, so a part starting there suffices.
  Rational reach = window.lo;
  bool at_start = true;
  for (const auto& iv : parts_) {
    if (iv.hi <= reach) continue;
    bool starts_ok = at_start ? iv.lo <= reach : iv.lo < reach;
    if (!starts_ok) return false;
    reach = iv.hi;
    at_start = false;
    if (reach >= window.hi) return true;
  }
  return false;
}

bool IntervalSet::is_subset_of(const Interval& host) const {
  return parts_.empty() || (host.lo <= parts_.front().lo && parts_.back().hi <= host.hi);
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return from_unsorted(std::move(all));
}

bool IntervalSet::contains(const Rational& x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const Interval& iv) { return iv.contains(x); });
}

// ------------------------------------------------------------- Configuration

const char* to_string(EndpointKind kind) {
  switch (kind) {
    case EndpointKind::Zero:
      return "zero";
    case EndpointKind::Left:
      return "left";
    case EndpointKind::Right:
      return "right";
  }
  return "?";
}

Configuration Configuration::make(std::vector<Interval> raw) {
  if (raw.empty()) throw ConfigurationError("configuration needs at least one interval");
  for (const auto& iv : raw) {
    if (!(iv.lo < iv.hi))
      throw ConfigurationError("interval needs lo < hi, got (" + to_string(iv.lo) + ", " +
                               to_string(iv.hi) + ")");
    if (iv.lo <= 0)
      throw ConfigurationError("interval (" + to_string(iv.lo) + ", " + to_string(iv.hi) +
                               ") must lie in (0, inf)");
  }
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  for (auto& iv : raw) {
    if (!merged.empty()) {
      Interval& back = merged.back();
      if (iv.lo < back.hi)
        throw ConfigurationError("intervals (" + to_string(back.lo) + ", " + to_string(back.hi) +
                                 ") and (" + to_string(iv.lo) + ", " + to_string(iv.hi) +
                                 ") overlap");
      if (iv.lo == back.hi) {
        back.hi = iv.hi;
        continue;
      }
    }
    merged.push_back(std::move(iv));
  }
  return Configuration(std::move(merged));
}

Configuration Configuration::make(std::vector<std::pair<Rational, Rational>> raw) {
  std::vector<Interval> iv;
  iv.reserve(raw.size());
  for (auto& [lo, hi] : raw) {
    Interval x;
    x.lo = std::move(lo);
    x.hi = std::move(hi);
    iv.push_back(std::move(x));
  }
  return make(std::move(iv));
}

Configuration make_configuration(std::vector<std::pair<Rational, Rational>> raw) {
  return Configuration::make(std::move(raw));
}

std::vector<Rational> Configuration::endpoint_values() const {
  std::vector<Rational> out;
  out.reserve(endpoint_count());
  out.emplace_back(0);
  for (const auto& iv : intervals_) {
    out.push_back(iv.lo);
    out.push_back(iv.hi);
  }
  return out;
}

Endpoint Configuration::endpoint(std::size_t index) const {
  if (index >= endpoint_count()) throw ConfigurationError("endpoint index out of range");
  if (index == 0) return Endpoint{Rational(0), EndpointKind::Zero, 0};
  const Interval& iv = intervals_[(index - 1) / 2];
  return index % 2 == 1 ? Endpoint{iv.lo, EndpointKind::Left, index}
                        : Endpoint{iv.hi, EndpointKind::Right, index};
}

std::vector<Endpoint> Configuration::endpoints() const {
  std::vector<Endpoint> out;
  out.reserve(endpoint_count());
  for (std::size_t i = 0; i < endpoint_count(); ++i) out.push_back(endpoint(i));
  return out;
}

std::optional<Endpoint> Configuration::find_endpoint(const Rational& value) const {
  auto values = endpoint_values();
  auto it = std::lower_bound(values.begin(), values.end(), value);
  if (it == values.end() || *it != value) return std::nullopt;
  return endpoint(static_cast<std::size_t>(it - values.begin()));
}

Rational Configuration::measure_in(const Interval& window) const {
  Rational total = 0;
  if (window.lo < 0) total += (window.hi < 0 ? window.hi : Rational(0)) - window.lo;
  for (const auto& iv : intervals_) {
    if (iv.lo >= window.hi) break;
    total += overlap_length(iv, window);
  }
  return total;
}

Rational Configuration::rel_measure(const Interval& window) const {
  Rational len = window.length();
  if (len <= 0) throw ConfigurationError("relative measure on an empty interval");
  Rational out = measure_in(window) / len;
  return out;
}

Rational Configuration::finite_measure() const {
  Rational total = 0;
  for (const auto& iv : intervals_) total += iv.length();
  return total;
}

IntervalSet Configuration::finite_part() const { return IntervalSet::from_unsorted(intervals_); }

bool Configuration::contains(const Rational& x) const {
  if (x < 0) return true;
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Interval& iv) { return iv.contains(x); });
}

// ----------------------------------------------------------- transformations

Configuration affine_image(const Configuration& c, const Rational& scale) {
  if (scale <= 0) throw ConfigurationError("affine_image needs a positive scale");
  std::vector<Interval> out;
  out.reserve(c.interval_count());
  for (const auto& iv : c.intervals()) out.emplace_back(iv.lo * scale, iv.hi * scale);
  return Configuration::make(std::move(out));
}

Configuration normalize(const Configuration& c) {
  Rational scale = 1 / c.last();
  return affine_image(c, scale);
}

Configuration truncate_at(const Configuration& c, const Rational& x) {
  std::vector<Interval> out;
  for (const auto& iv : c.intervals()) {
    if (iv.lo >= x) break;
    out.emplace_back(iv.lo, iv.hi < x ? iv.hi : x);
  }
  if (out.empty())
    throw ConfigurationError("truncation at " + to_string(x) + " leaves no interval");
  return Configuration::make(std::move(out));
}

std::vector<Interval> reflect_truncate_pieces(const Configuration& c, const Rational& lo,
                                              const Rational& hi, ReflectMode mode) {
  if (!(lo < hi)) throw ConfigurationError("reflect_truncate needs lo < hi");
  if (!c.find_endpoint(lo) || !c.find_endpoint(hi))
    throw ConfigurationError("reflect_truncate bounds must be endpoints of the configuration");
  Interval window(lo, hi);
  std::vector<Interval> pieces;
  for (const auto& iv : c.intervals()) {
    if (!iv.overlaps(window)) continue;
    Rational a = iv.lo > lo ? iv.lo : lo;
    Rational b = iv.hi < hi ? iv.hi : hi;
    if (mode == ReflectMode::Forward)
      pieces.emplace_back(a - lo, b - lo);
    else
      pieces.emplace_back(hi - b, hi - a);
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return pieces;
}

Configuration reflect_truncate(const Configuration& c, const Rational& lo, const Rational& hi,
                               ReflectMode mode) {
  auto pieces = reflect_truncate_pieces(c, lo, hi, mode);
  if (pieces.empty()) throw ConfigurationError("reflect_truncate: no interval inside the window");
  if (pieces.front().lo <= 0)
    throw ConfigurationError("reflect_truncate: degenerate result, first interval touches the ray");
  return Configuration::make(std::move(pieces));
}

Configuration mirror(const Configuration& c) {
  if (c.last() != 1) throw ConfigurationError("mirror needs a configuration normalized to b_r = 1");
  std::vector<Interval> out;
  Rational prev_hi = 0;
  for (const auto& iv : c.intervals()) {
    if (prev_hi < iv.lo) out.emplace_back(1 - iv.lo, 1 - prev_hi);
    prev_hi = iv.hi;
  }
  // The gap (0, a_1) maps to (1 - a_1, 1); the new last endpoint is 1.
  return Configuration::make(std::move(out));
}

}  // namespace dlab
