#include "densitylab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "densitylab/profile.hpp"
#include "densitylab/random.hpp"
#include "densitylab/sweep.hpp"

namespace dlab {

std::vector<double> decode_points(const ParamVector& v) {
  const auto n = static_cast<Eigen::Index>(2 * v.r);
  if (v.r < 1 || v.coords.size() != n) throw std::invalid_argument("ParamVector needs 2r coordinates");
  Eigen::ArrayXd inc = (v.coords.array() - v.coords.maxCoeff()).exp();
  if (!inc.allFinite()) throw std::invalid_argument("ParamVector has non-finite coordinates");
  inc /= inc.sum();
  inc = inc.max(kIncrementFloor);
  inc /= inc.sum();
  std::vector<double> pts(static_cast<std::size_t>(n + 1), 0.0);
  double acc = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += inc[i];
    pts[static_cast<std::size_t>(i + 1)] = acc;
  }
  pts.back() = 1.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i - 1] < pts[i])) throw std::invalid_argument("decoded endpoints are not increasing");
  return pts;
}

ParamVector encode(const Configuration& c) {
  auto pts = normalize(c).endpoint_values();
  ParamVector v;
  v.r = static_cast<int>(c.interval_count());
  v.coords.resize(static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    v.coords[static_cast<Eigen::Index>(i)] = std::log(to_double(pts[i + 1] - pts[i]));
  return v;
}

Configuration to_configuration(const ParamVector& v) {
  auto pts = decode_points(v);
  std::vector<Interval> ivs;
  for (std::size_t i = 1; i + 1 < pts.size(); i += 2) ivs.emplace_back(from_double(pts[i]), from_double(pts[i + 1]));
  return Configuration::make(std::move(ivs));
}

double float_delta_star(const std::vector<double>& pts) {
  auto [e, arg] = sweep::min_escape<double>(std::span<const double>(pts));
  (void)arg;
  return 1.0 - e.num / e.den;
}

double objective(const ParamVector& v) { return float_delta_star(decode_points(v)); }

Rational theorem_floor() { return make_rational(2629, 10000); }

namespace {

struct Candidate {
  ParamVector params;
  double value = 0;
  Rational exact;
  std::size_t restart = 0;
};

/// Orders by exact value, then lexicographically by coordinates.
bool better(const Candidate& a, const Candidate& b) {
  if (a.exact != b.exact) return a.exact < b.exact;
  return std::lexicographical_compare(a.params.coords.begin(), a.params.coords.end(),
                                      b.params.coords.begin(), b.params.coords.end());
}

struct RestartOutcome {
  Candidate best;
  RestartTrace trace;
  std::size_t certifications = 0;
  std::vector<PrecisionIncident> incidents;
};

RestartOutcome run_restart(const SearchOptions& opt, int r, std::size_t k) {
  auto rng = derived_stream(opt.seed, k);
  const Eigen::Index dim = 2 * r;
  ParamVector start{r, Eigen::VectorXd(dim)};
  if (opt.init) {
    start = encode(*opt.init);
    if (k > 0)
      for (Eigen::Index i = 0; i < dim; ++i) start.coords[i] += opt.init_jitter * normal01(rng);
  } else {
    for (Eigen::Index i = 0; i < dim; ++i) start.coords[i] = normal01(rng);
  }

  RestartOutcome out;
  out.trace.restart = k;
  const Rational floor = theorem_floor();

  auto certify = [&](const ParamVector& p, double value, std::size_t iter) {
    Rational exact = delta_star(to_configuration(p));
    ++out.certifications;
    if (exact < floor)
      throw std::logic_error("certified delta* " + to_string(exact) + " below the theorem floor");
    if (std::abs(value - to_double(exact)) > 1e-6)
      out.incidents.push_back({k, iter, value, exact});
    return exact;
  };

  // Simplex of dim + 1 vertices.
  std::vector<Eigen::VectorXd> x(static_cast<std::size_t>(dim + 1), start.coords);
  for (Eigen::Index i = 0; i < dim; ++i) x[static_cast<std::size_t>(i + 1)][i] += opt.initial_step;
  std::vector<double> f(x.size());
  auto eval = [&](const Eigen::VectorXd& c) { return objective(ParamVector{r, c}); };
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = eval(x[i]);

  out.best.params = start;
  out.best.value = f[0];
  out.best.exact = certify(start, f[0], 0);
  out.best.restart = k;

  std::vector<std::size_t> order(x.size());
  for (std::size_t it = 1; it <= opt.iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != hi) centroid += x[i];
    centroid /= static_cast<double>(dim);

    Eigen::VectorXd xr = centroid + (centroid - x[hi]);
    double fr = eval(xr);
    if (fr < f[lo]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - x[hi]);
      double fe = eval(xe);
      if (fe < fr) {
        x[hi] = xe;
        f[hi] = fe;
      } else {
        x[hi] = xr;
        f[hi] = fr;
      }
    } else if (fr < f[second]) {
      x[hi] = xr;
      f[hi] = fr;
    } else {
      const bool outside = fr < f[hi];
      Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                   : Eigen::VectorXd(centroid + 0.5 * (x[hi] - centroid));
      double fc = eval(xc);
      if (fc < (outside ? fr : f[hi])) {
        x[hi] = xc;
        f[hi] = fc;
      } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (i == lo) continue;
          x[i] = x[lo] + 0.5 * (x[i] - x[lo]);
          f[i] = eval(x[i]);
        }
      }
    }

    std::size_t best = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    if (f[best] < out.best.value) {
      ParamVector cand{r, x[best]};
      Rational exact = certify(cand, f[best], it);
      if (exact < out.best.exact) {
        out.best.params = cand;
        out.best.value = f[best];
        out.best.exact = exact;
      }
    }
    out.trace.incumbent.push_back(to_double(out.best.exact));
  }
  return out;
}

}  // namespace

SearchResult search(const SearchOptions& opt) {
  const int r = opt.init ? static_cast<int>(opt.init->interval_count()) : opt.r;
  if (r < 1) throw std::invalid_argument("search needs r >= 1");
  if (opt.restarts < 1) throw std::invalid_argument("search needs at least one restart");

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, opt.restarts);
  std::vector<RestartOutcome> outcomes(opt.restarts);
  auto run_block = [&](std::size_t w) {
    for (std::size_t k = w; k < opt.restarts; k += workers) outcomes[k] = run_restart(opt, r, k);
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run_block, w));
    for (auto& j : jobs) j.get();
  }

  const Candidate* best = &outcomes.front().best;
  for (const auto& o : outcomes)
    if (better(o.best, *best)) best = &o.best;

  SearchResult res;
  res.best_params = best->params;
  res.float_objective = best->value;
  res.exact_objective = best->exact;
  res.best_config = to_configuration(best->params);
  res.best_restart = best->restart;
  res.seed = opt.seed;
  res.iterations = opt.iters;
  for (auto& o : outcomes) {
    res.trace.push_back(std::move(o.trace));
    res.certifications += o.certifications;
    res.incidents.insert(res.incidents.end(), o.incidents.begin(), o.incidents.end());
  }
  return res;
}

NeighborhoodSample neighborhood_sample(double m, double s) {
  NeighborhoodSample out{m, s};
  out.worst = std::max({1.0 / m - s, s * m, 1.0 / s - 1.0});
  out.min_escape = 1.0 - out.worst / 2.0;
  return out;
}

NeighborhoodAudit neighborhood_audit(const CmsnParams& params, double radius, int directions) {
  validate(params);
  NeighborhoodAudit audit;
  const double m = to_double(params.m), s = to_double(params.s);
  audit.center = neighborhood_sample(m, s);
  audit.first_row = 1.0 / m - s;
  audit.last_row = s * m;
  audit.other_rows = 1.0 / s - 1.0;
  audit.spread = std::max({audit.first_row, audit.last_row, audit.other_rows}) -
                 std::min({audit.first_row, audit.last_row, audit.other_rows});
  audit.center_is_max = true;
  for (int k = 0; k < directions; ++k) {
    const double t = 6.283185307179586 * k / directions;
    auto sample = neighborhood_sample(m + radius * std::cos(t), s + radius * std::sin(t));
    if (!(sample.min_escape < audit.center.min_escape)) audit.center_is_max = false;
    audit.samples.push_back(sample);
  }
  return audit;
}

}  // namespace dlab
