#include "doctest.h"

#include <cstdlib>

#include "densitylab/constructions.hpp"
#include "densitylab/profile.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::testing::q;

TEST_CASE("build_cmsn small cases") {
  CmsnParams p{q(1, 2), q(1, 2), 2};
  CHECK(build_cmsn(p) == make_configuration({{q(1, 2), q(5, 8)}, {q(3, 4), q(7, 8)}}));
  p.n = 1;
  CHECK(build_cmsn(p) == make_configuration({{q(1, 2), q(3, 4)}}));
  CHECK_THROWS(build_cmsn(CmsnParams{q(0), q(1, 2), 2}));
  CHECK_THROWS(build_cmsn(CmsnParams{q(1, 2), q(1), 2}));
  CHECK_THROWS(build_cmsn(CmsnParams{q(1, 2), q(1, 2), 0}));
}

TEST_CASE("build_cmsn matches the fractional-part predicate") {
  auto p = optimal_cmsn(100);
  auto c = build_cmsn(p);
  CHECK(c.interval_count() == 100);
  CHECK(c.intervals().front().lo == 1 - p.m);
  CHECK(c.last() < 1);
  CHECK(c.finite_measure() == p.s * p.m);
  auto pts = c.endpoint_values();
  for (long k = 1; k < 20000; ++k) {
    Rational x = q(k, 20000);
    if (std::binary_search(pts.begin(), pts.end(), x)) continue;
    CHECK(c.contains(x) == testing::cmsn_predicate(p.m, p.s, p.n, x));
  }
}

TEST_CASE("optimal parameters solve the triple equation") {
  auto o = optimal_params();
  CHECK(to_double(o.q) == doctest::Approx(0.543689).epsilon(1e-6));
  CHECK(to_double(o.s) == doctest::Approx(0.647799).epsilon(1e-6));
  CHECK(to_double(o.m) == doctest::Approx(0.839287).epsilon(1e-6));
  const Rational tol = q(1, 1000000000000L);
  CHECK(abs(1 / o.m - o.s - o.q) < tol);
  CHECK(abs(o.s * o.m - o.q) < tol);
  CHECK(abs(1 / o.s - 1 - o.q) < tol);
  Rational d = o.q / 2;
  CHECK(abs(8 * d * d * d + 4 * d * d + 2 * d - 1) < tol);
}

TEST_CASE("cmsn_table on m = s = 1/2, N = 2") {
  auto rows = cmsn_table(CmsnParams{q(1, 2), q(1, 2), 2});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].family == 1);
  CHECK(rows[0].twice_density == q(5, 4));
  CHECK(rows[0].closed_form == q(5, 4));
  CHECK(rows[1].family == 2);
  CHECK(rows[1].closed_form == q(1, 2));
  CHECK(rows[1].twice_density == q(1, 2));
  CHECK(rows[2].family == 3);
  for (std::size_t i = 3; i < rows.size(); ++i) {
    CHECK(rows[i].family == 4);
    CHECK(rows[i].radius == q(1, 8));
    CHECK(rows[i].closed_form == 1);
    CHECK(rows[i].twice_density == 1);
  }
}

TEST_CASE("cmsn_table exact rows at the optimum") {
  auto p = optimal_cmsn(100);
  for (const auto& row : cmsn_table(p)) {
    CHECK(row.twice_density == 2 * build_cmsn(p).rel_measure(ball(row.endpoint, row.radius)));
    if (row.family == 3)
      CHECK(row.difference() <= q(3, 100));
    else
      CHECK(row.difference() == 0);
  }
}

TEST_CASE("bound constants") {
  auto k = solve_bound_constants();
  CHECK(to_decimal(k.delta_upper.value, 4) == "0.2718");
  CHECK(k.delta_upper.value < q(2719, 10000));
  CHECK(k.delta_lower.value > q(2629, 10000));
  CHECK(k.delta_lower.value < q(2630, 10000));
  CHECK(to_decimal(k.kolyada_upper.value, 7) == "0.2807764");
  CHECK(k.delta_lower.value < k.delta_upper.value);
  CHECK(k.delta_upper.value < k.kolyada_upper.value);
  CHECK(k.kolyada_upper.value < q(281, 1000));
  for (const auto* c : {&k.q_upper, &k.delta_upper, &k.delta_lower, &k.kolyada_upper, &k.conjectured})
    CHECK(c->residual < 1e-12);
  CHECK(abs(k.conjectured.value - k.delta_upper.value) < Rational(1) / Rational(BigInt("1000000000000000000000000000000")));
  // (sqrt(17) - 3)/4 squared against the quadratic it solves.
  CHECK(std::abs(to_double(k.kolyada_upper.value) - (std::sqrt(17.0) - 3) / 4) < 1e-15);
}

TEST_CASE("lower bound polynomial") {
  CHECK(lower_bound_polynomial(q(1, 4)) == q(15, 16));
  CHECK(to_double(lower_bound_polynomial(q(2629, 10000))) == doctest::Approx(0.999616).epsilon(1e-5));
  CHECK(lower_bound_polynomial(q(2629, 10000)) < 1);
  CHECK(to_double(lower_bound_polynomial(q(2630, 10000))) == doctest::Approx(1.00010).epsilon(1e-5));
  CHECK(lower_bound_polynomial(q(2630, 10000)) > 1);
}

TEST_CASE("solve_constant names and precision control") {
  CHECK(solve_constant("upper").name == "delta_upper");
  CHECK_THROWS(solve_constant("sideways"));
  ::setenv("DF_PRECISION_BITS", "10", 1);
  CHECK(precision_bits() == 48);
  ::setenv("DF_PRECISION_BITS", "9999", 1);
  CHECK(precision_bits() == 4096);
  ::setenv("DF_PRECISION_BITS", "100", 1);
  CHECK(precision_bits() == 100);
  ::setenv("DF_PRECISION_BITS", "junk", 1);
  CHECK(precision_bits() == 213);
  ::unsetenv("DF_PRECISION_BITS");
  CHECK(precision_bits() == 213);
}

TEST_CASE("bisect_root") {
  Polynomial p{q(-2), q(0), q(1)};  // x^2 - 2
  Rational r = bisect_root(p, 1, 2, 60);
  CHECK(std::abs(to_double(r) - std::sqrt(2.0)) < 1e-15);
  CHECK(bisect_root(Polynomial{q(-1), q(1)}, 0, 2, 5) == 1);
  CHECK_THROWS(bisect_root(p, 2, 3, 10));
}

TEST_CASE("H(eps) recursion") {
  auto base = make_configuration({{q(1, 2), q(1)}});
  auto h1 = build_h_approx(base, q(1, 10), 1);
  REQUIRE(h1.levels.size() == 1);
  CHECK(h1.levels[0] == IntervalSet::from_unsorted({Interval(q(1, 2), 1)}));

  auto h2 = build_h_approx(base, q(1, 10), 2);
  CHECK(h2.levels[1] == IntervalSet::from_unsorted({Interval(q(2, 5), q(9, 20)), Interval(q(1, 2), 1),
                                                    Interval(q(21, 20), q(11, 10))}));
  auto h3 = build_h_approx(base, q(1, 10), 3);
  for (std::size_t k = 0; k + 1 < h3.levels.size(); ++k)
    for (const auto& iv : h3.levels[k].parts())
      CHECK(h3.levels[k + 1].covers(iv));
  CHECK(h3.endpoints_with_zero() == 3);
  CHECK(h3.endpoints_without_zero() == 2);

  // Base intervals beyond 1 are dropped, the straddling one clipped.
  auto clipped = build_h_approx(make_configuration({{q(1, 2), q(3, 2)}}), q(1, 10), 1);
  CHECK(clipped.base_part == IntervalSet::from_unsorted({Interval(q(1, 2), 1)}));

  CHECK_THROWS_AS(build_h_approx(make_configuration({{q(1, 4), q(1, 2)}, {q(3, 4), q(1)}}), q(1, 2), 2),
                  HApproxError);
  CHECK_THROWS_AS(build_h_approx(base, q(0), 2), HApproxError);
  CHECK_THROWS_AS(build_h_approx(base, q(1, 10), 0), HApproxError);
  CHECK_THROWS_AS(build_h_approx(make_configuration({{q(2), q(3)}}), q(1, 10), 2), HApproxError);
}

TEST_CASE("H(eps) tail bound at a level-1 endpoint") {
  auto base = make_configuration({{q(1, 2), q(1)}});
  const Rational eps = q(1, 100);
  auto h = build_h_approx(base, eps, 3);
  auto t = h_tail_check(h, 1, q(1, 2), q(1, 2));
  CHECK(t.m_used == 3);
  CHECK(t.tail_ok);
  REQUIRE(t.remainder_bound_valid.has_value());
  // Also under the four-endpoint count.
  CHECK(t.tail_built + t.remainder_bound < 4 * eps / (1 - 4 * eps));
  REQUIRE(t.level_masses.size() == 2);
  CHECK(t.level_masses[1] / t.level_masses[0] == 3 * eps);
  CHECK(t.density_ok);
  auto coarse = build_h_approx(base, q(1, 20), 3);
  auto tc = h_tail_check(coarse, 1, q(1, 2), q(1, 2));
  CHECK(t.density_bound - t.density_n < tc.density_bound - tc.density_n);
  CHECK_THROWS_AS(h_tail_check(h, 1, q(3, 4), q(1, 2)), HApproxError);
  CHECK_THROWS_AS(h_tail_check(h, 3, q(1, 2), q(1, 2)), HApproxError);
}
