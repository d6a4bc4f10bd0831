#include "doctest.h"

#include "densitylab/configuration.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::testing::q;

namespace {
Configuration sym() { return make_configuration({{q(1, 2), q(1)}}); }
Configuration two() { return make_configuration({{q(1, 4), q(1, 2)}, {q(3, 4), q(1)}}); }
}  // namespace

TEST_CASE("make_configuration validates, sorts and merges") {
  auto c = sym();
  CHECK(c.endpoint_values() == std::vector<Rational>{0, q(1, 2), 1});
  CHECK(make_configuration({{q(1, 2), q(3, 4)}, {q(3, 4), q(1)}}) == sym());
  CHECK(make_configuration({{q(3, 4), q(1)}, {q(1, 4), q(1, 2)}}) == two());
  CHECK_THROWS_AS(make_configuration({{q(1, 2), q(1)}, {q(1, 4), q(3, 5)}}), ConfigurationError);
  CHECK_THROWS_AS(make_configuration({{q(1), q(1, 2)}}), ConfigurationError);
  CHECK_THROWS_AS(make_configuration({{q(0), q(1, 2)}}), ConfigurationError);
  CHECK_THROWS_AS(make_configuration({{q(-1), q(1, 2)}}), ConfigurationError);
  CHECK_THROWS_AS(make_configuration({}), ConfigurationError);
}

TEST_CASE("endpoint kinds and lookup") {
  auto eps = two().endpoints();
  REQUIRE(eps.size() == 5);
  CHECK(eps[0].kind == EndpointKind::Zero);
  CHECK(eps[1].kind == EndpointKind::Left);
  CHECK(eps[2].kind == EndpointKind::Right);
  CHECK(eps[3].value == q(3, 4));
  CHECK(two().find_endpoint(q(1, 2))->index == 2);
  CHECK_FALSE(two().find_endpoint(q(5, 8)).has_value());
}

TEST_CASE("measure_in counts the ray") {
  auto c = sym();
  CHECK(c.measure_in(Interval(-1, 1)) == q(3, 2));
  CHECK(c.measure_in(Interval(0, q(1, 2))) == 0);
  CHECK(c.measure_in(Interval(q(1, 4), q(3, 4))) == q(1, 4));
  CHECK(c.measure_in(Interval(-3, -1)) == 2);
  CHECK(c.measure_in(Interval(2, 3)) == 0);
}

TEST_CASE("rel_measure") {
  auto c = sym();
  CHECK(c.rel_measure(Interval(-1, 1)) == q(3, 4));
  CHECK(c.rel_measure(Interval(q(1, 2), 1)) == 1);
  CHECK(c.rel_measure(Interval(0, q(1, 2))) == 0);
  CHECK_THROWS_AS(Interval(1, 1), ConfigurationError);
}

TEST_CASE("affine_image and normalize") {
  CHECK(affine_image(sym(), 2) == make_configuration({{q(1), q(2)}}));
  CHECK(affine_image(sym(), 1) == sym());
  CHECK(normalize(make_configuration({{q(1), q(4)}})) == make_configuration({{q(1, 4), q(1)}}));
  CHECK_THROWS_AS(affine_image(sym(), 0), ConfigurationError);
  CHECK_THROWS_AS(affine_image(sym(), -1), ConfigurationError);
}

TEST_CASE("truncate_at") {
  CHECK(truncate_at(sym(), q(3, 4)) == make_configuration({{q(1, 2), q(3, 4)}}));
  CHECK(truncate_at(sym(), 2) == sym());
  CHECK(truncate_at(two(), q(5, 8)) == make_configuration({{q(1, 4), q(1, 2)}}));
  CHECK_THROWS_AS(truncate_at(sym(), q(1, 4)), ConfigurationError);
  CHECK_THROWS_AS(truncate_at(sym(), q(1, 2)), ConfigurationError);
}

TEST_CASE("reflect_truncate forward shifts the window to the origin") {
  CHECK(reflect_truncate(two(), q(1, 2), 1, ReflectMode::Forward) == make_configuration({{q(1, 4), q(1, 2)}}));
}

TEST_CASE("reflect_truncate reflected: degenerate first piece is rejected") {
  auto pieces = reflect_truncate_pieces(sym(), 0, 1, ReflectMode::Reflected);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0] == Interval(0, q(1, 2)));
  CHECK_THROWS_AS(reflect_truncate(sym(), 0, 1, ReflectMode::Reflected), ConfigurationError);
}

TEST_CASE("reflect_truncate reflected over (0, 7/8)") {
  auto c = make_configuration({{q(1, 4), q(1, 2)}, {q(3, 4), q(7, 8)}});
  auto pieces = reflect_truncate_pieces(c, 0, q(7, 8), ReflectMode::Reflected);
  // Brute force: reflect each C-piece inside the window through x -> 7/8 - x.
  std::vector<Interval> expected;
  for (const auto& iv : c.intervals()) expected.emplace_back(q(7, 8) - iv.hi, q(7, 8) - iv.lo);
  std::sort(expected.begin(), expected.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  CHECK(pieces == expected);
  CHECK(pieces[1] == Interval(q(3, 8), q(5, 8)));
  CHECK_THROWS_AS(reflect_truncate(c, 0, q(7, 8), ReflectMode::Reflected), ConfigurationError);
}

TEST_CASE("reflect_truncate reflected on an inner window") {
  auto c = make_configuration({{q(1, 4), q(1, 2)}, {q(3, 4), q(7, 8)}});
  // 7/8 - (C ∩ (1/2, 7/8)) = (0, 1/8): touches the ray.
  auto r = reflect_truncate_pieces(c, q(1, 2), q(7, 8), ReflectMode::Reflected);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Interval(0, q(1, 8)));
  CHECK_THROWS_AS(reflect_truncate(c, q(1, 3), 1, ReflectMode::Forward), ConfigurationError);
}

TEST_CASE("mirror swaps C and its complement on (0,1)") {
  auto c = two();
  auto m = mirror(c);
  CHECK(m == make_configuration({{q(1, 4), q(1, 2)}, {q(3, 4), q(1)}}));
  auto s = mirror(sym());
  CHECK(s == sym());
  auto t = make_configuration({{q(1, 3), q(1, 2)}, {q(2, 3), q(1)}});
  for (const auto& e : t.endpoint_values())
    for (const Rational& w : {q(1, 7), q(1, 3), q(3, 5), q(2)})
      CHECK(mirror(t).rel_measure(ball(1 - e, w)) == 1 - t.rel_measure(ball(e, w)));
  CHECK_THROWS_AS(mirror(make_configuration({{q(1), q(2)}})), ConfigurationError);
}

TEST_CASE("IntervalSet merges overlaps but keeps touching parts apart") {
  auto s = IntervalSet::from_unsorted({Interval(0, 1), Interval(1, 2), Interval(q(1, 2), q(3, 4))});
  CHECK(s.size() == 2);
  CHECK_FALSE(s.covers(Interval(0, 2)));
  CHECK(s.covers(Interval(q(1, 4), q(3, 4))));
  CHECK_FALSE(s.contains(1));
  auto t = IntervalSet::from_unsorted({Interval(0, 1), Interval(1, 2)}, true);
  CHECK(t.size() == 1);
  CHECK(s.measure() == 2);
  CHECK(s.measure_in(Interval(q(1, 2), q(3, 2))) == 1);
  CHECK(s.is_subset_of(Interval(0, 2)));
  CHECK_FALSE(s.is_subset_of(Interval(0, q(3, 2))));
}
