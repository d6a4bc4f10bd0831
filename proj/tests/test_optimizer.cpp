#include "doctest.h"

#include <cmath>

#include "densitylab/optimizer.hpp"
#include "densitylab/profile.hpp"
#include "densitylab/report.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::testing::q;

TEST_CASE("encode and decode round-trip") {
  auto sym = make_configuration({{q(1, 2), q(1)}});
  auto v = encode(sym);
  CHECK(v.r == 1);
  CHECK(v.coords.size() == 2);
  auto pts = decode_points(v);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0] == 0.0);
  CHECK(pts[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pts[2] == 1.0);
  CHECK(objective(v) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(to_configuration(v).intervals().back().hi == 1);

  // Scaling is forgotten: (1, 2) encodes like (1/2, 1).
  auto doubled = encode(make_configuration({{q(1), q(2)}}));
  CHECK(doubled.coords[0] - doubled.coords[1] == doctest::Approx(v.coords[0] - v.coords[1]));
}

TEST_CASE("decode floors tiny increments") {
  ParamVector v{2, Eigen::VectorXd(4)};
  v.coords << 0.0, -60.0, 0.0, 0.0;
  auto pts = decode_points(v);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i] - pts[i - 1] >= kIncrementFloor * 0.99);
  CHECK_THROWS_AS(decode_points(ParamVector{2, Eigen::VectorXd::Zero(3)}), std::invalid_argument);
}

TEST_CASE("float objective matches the exact engine") {
  for (long n : {10L, 37L}) {
    auto c = build_cmsn(optimal_cmsn(n));
    std::vector<double> pts;
    for (const auto& e : c.endpoint_values()) pts.push_back(to_double(e));
    CHECK(std::abs(float_delta_star(pts) - to_double(delta_star(c))) < 1e-9);
  }
  auto rng = derived_stream(3, 0);
  for (int t = 0; t < 50; ++t) {
    ParamVector v{3, Eigen::VectorXd(6)};
    for (int i = 0; i < 6; ++i) v.coords[i] = normal01(rng);
    Rational exact = delta_star(to_configuration(v));
    CHECK(std::abs(objective(v) - to_double(exact)) < 1e-9);
    CHECK(exact >= theorem_floor());
  }
}

TEST_CASE("single-interval search reaches the grid minimum") {
  // Grid oracle over (a, 1), a = k/1000.
  double grid_min = 1;
  for (int k = 1; k < 1000; ++k)
    grid_min = std::min(grid_min, testing::sampled_delta_star(make_configuration({{q(k, 1000), q(1)}})));
  SearchOptions opt;
  opt.r = 1;
  opt.restarts = 4;
  opt.iters = 300;
  opt.seed = 5;
  auto res = search(opt);
  CHECK(to_double(res.exact_objective) <= grid_min + 1e-6);
  CHECK(to_double(res.exact_objective) >= grid_min - 1e-3);
  CHECK(res.exact_objective == delta_star(res.best_config));
  CHECK(res.certification_gap() < 1e-6);
  CHECK(res.incidents.empty());
}

TEST_CASE("search is reproducible and its trace is monotone") {
  SearchOptions opt;
  opt.r = 3;
  opt.restarts = 3;
  opt.iters = 150;
  opt.seed = 17;
  auto a = search(opt);
  auto b = search(opt);
  CHECK(to_json(a).dump() == to_json(b).dump());
  REQUIRE(a.trace.size() == 3);
  for (const auto& tr : a.trace) {
    CHECK(tr.incumbent.size() == opt.iters);
    for (std::size_t i = 1; i < tr.incumbent.size(); ++i) CHECK(tr.incumbent[i] <= tr.incumbent[i - 1]);
  }
  CHECK(a.exact_objective >= theorem_floor());
  CHECK(a.certifications >= a.trace.size());

  opt.seed = 18;
  CHECK(to_json(search(opt)).dump() != to_json(a).dump());
}

TEST_CASE("seeded search never starts worse than its seed") {
  SearchOptions opt;
  opt.init = build_cmsn(optimal_cmsn(10));
  opt.restarts = 1;
  opt.iters = 50;
  auto res = search(opt);
  CHECK(res.best_params.r == 10);
  CHECK(to_double(res.exact_objective) <= to_double(delta_star(*opt.init)) + 1e-9);
}

TEST_CASE("neighborhood audit at the optimal parameters") {
  auto params = optimal_cmsn(1000);
  auto audit = neighborhood_audit(params, 0.01);
  CHECK(audit.spread < 1e-9);
  CHECK(audit.first_row == doctest::Approx(audit.last_row).epsilon(1e-9));
  CHECK(audit.other_rows == doctest::Approx(audit.last_row).epsilon(1e-9));
  CHECK(audit.center.worst == doctest::Approx(2 * to_double(solve_constant("upper").value)).epsilon(1e-9));
  CHECK(audit.samples.size() == 64);
  CHECK(audit.center_is_max);

  const double m = to_double(params.m), s = to_double(params.s);
  CHECK(neighborhood_sample(m + 0.01, s).min_escape < audit.center.min_escape);
  CHECK(neighborhood_sample(m, s - 0.01).min_escape < audit.center.min_escape);
}
