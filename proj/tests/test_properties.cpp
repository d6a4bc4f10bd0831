#include "doctest.h"

#include "densitylab/oracles.hpp"
#include "densitylab/profile.hpp"
#include "support.hpp"

using namespace dlab;
using dlab::testing::q;

namespace {

Rational random_point(std::mt19937_64& rng, long den, long span) { return q(uniform_int(rng, 0, span * den), den); }

}  // namespace

TEST_CASE("relative measure is a probability and measure is additive") {
  auto rng = derived_stream(101, 0);
  for (int t = 0; t < 300; ++t) {
    auto c = testing::random_configuration(rng);
    Rational a = random_point(rng, 97, 3) - 1, b = random_point(rng, 97, 3) - 1, m = random_point(rng, 97, 3) - 1;
    if (a == b) continue;
    if (b < a) std::swap(a, b);
    Rational rel = c.rel_measure(Interval(a, b));
    CHECK(rel >= 0);
    CHECK(rel <= 1);
    if (a < m && m < b) CHECK(c.measure_in(Interval(a, b)) == c.measure_in(Interval(a, m)) + c.measure_in(Interval(m, b)));
  }
}

TEST_CASE("affine images preserve densities and delta*") {
  auto rng = derived_stream(102, 0);
  for (int t = 0; t < 100; ++t) {
    auto c = testing::random_configuration(rng);
    Rational k = q(uniform_int(rng, 1, 50), uniform_int(rng, 1, 50));
    auto ck = affine_image(c, k);
    for (const auto& e : c.endpoint_values()) {
      Rational w = q(uniform_int(rng, 1, 200), 37);
      CHECK(ck.rel_measure(ball(k * e, k * w)) == c.rel_measure(ball(e, w)));
    }
    CHECK(delta_star(ck) == delta_star(c));
    CHECK(delta_star(normalize(c)) == delta_star(c));
  }
}

TEST_CASE("overlapping pieces merge back to the same set") {
  auto rng = derived_stream(103, 0);
  for (int t = 0; t < 100; ++t) {
    auto c = testing::random_configuration(rng);
    std::vector<Interval> pieces;
    for (const auto& iv : c.intervals()) {
      Rational third = iv.length() / 3;
      pieces.emplace_back(iv.hi - 2 * third, iv.hi);
      pieces.emplace_back(iv.lo, iv.lo + 2 * third);
    }
    auto merged = IntervalSet::from_unsorted(pieces);
    CHECK(merged.parts() == c.intervals());
  }
}

TEST_CASE("exact extrema agree with the brute-force breakpoint scan") {
  auto rng = derived_stream(104, 0);
  for (int t = 0; t < 200; ++t) {
    auto c = testing::random_configuration(rng);
    for (const auto& e : c.endpoints()) {
      auto fast = profile_extrema(c, e);
      auto slow = testing::brute_extrema(c, e.value);
      CHECK(fast.sup_density == slow.sup);
      CHECK(fast.inf_density == slow.inf);
      CHECK(fast.sup_radius == slow.sup_radius);
      CHECK(fast.inf_radius == slow.inf_radius);
    }
    CHECK(delta_star(c) == testing::brute_delta_star(c));
  }
}

TEST_CASE("mirroring preserves delta*") {
  auto rng = derived_stream(105, 0);
  for (int t = 0; t < 200; ++t) {
    auto c = normalize(testing::random_configuration(rng));
    CHECK(delta_star(mirror(c)) == delta_star(c));
    CHECK(mirror(mirror(c)) == c);
  }
}

TEST_CASE("delta* floors and the quarter point") {
  auto rng = derived_stream(106, 0);
  for (int t = 0; t < 300; ++t) {
    auto c = testing::random_configuration(rng);
    Rational ds = delta_star(c);
    CHECK(ds >= q(1, 4));
    CHECK(ds >= q(2629, 10000));
    CHECK(ds <= q(1, 2));
    auto qp = quarter_point(c);
    CHECK(c.find_endpoint(qp.value).has_value());
    CHECK(testing::brute_escape(c, qp.value) <= q(3, 4));
  }
}

TEST_CASE("counterexample decision flips exactly at delta*") {
  auto rng = derived_stream(107, 0);
  for (int t = 0; t < 200; ++t) {
    auto c = testing::random_configuration(rng);
    Rational ds = delta_star(c);
    CHECK_FALSE(is_counterexample(c, ds).refutes);
    Rational above = ds + q(1, 10000);
    if (above < q(1, 2)) {
      auto dec = is_counterexample(c, above);
      CHECK(dec.refutes);
      CHECK(dec.witnesses.size() == c.endpoint_count());
    }
  }
}

// The proof's downstream claims lean on Lemma 2's dichotomy, which minimal
// counterexamples satisfy. Random ones need not, so the property is
// conditional: dichotomy => every ASSERTED check. When the dichotomy fails,
// truncation must produce a smaller counterexample.
TEST_CASE("proof inspection on random counterexamples") {
  auto rng = derived_stream(108, 0);
  int inspected = 0, with_dichotomy = 0, truncations = 0;
  for (int t = 0; t < 600; ++t) {
    auto c = testing::random_configuration(rng, 6, 16);
    Rational ds = delta_star(c);
    if (ds >= q(49, 100)) continue;
    Rational delta = ds + (q(1, 2) - ds) / 5;
    auto insp = proof_inspect(c, delta);
    ++inspected;
    for (const char* name : {"color_zero_black", "color_last_white"}) CHECK_MESSAGE(insp.find(name)->passed, name);
    if (!insp.complete) {
      // v_B or v_W undefined: a partial inspection that says why.
      CHECK_FALSE(insp.reason.empty());
    } else {
      for (const char* name : {"lemma3_black", "lemma3_white"}) CHECK_MESSAGE(insp.find(name)->passed, name);
    }
    if (insp.complete && insp.find("lemma2_dichotomy")->passed) {
      ++with_dichotomy;
      CHECK(insp.asserted_ok());
    }
    for (const auto& ce : insp.colored) {
      const Rational& v = ce.endpoint.value;
      bool eligible = (ce.color == Color::Black && v <= q(1, 2)) || (ce.color == Color::White && v >= q(1, 2));
      if (!eligible) continue;
      auto rep = lemma2_probe(insp.config, delta, ce.endpoint);
      if (!rep.truncated) continue;
      ++truncations;
      CHECK(rep.truncated_is_counterexample);
      for (const auto& cl : rep.claims) {
        CHECK(cl.gap_ok);
        CHECK(cl.new_ok);
      }
    }
  }
  CHECK(inspected > 300);
  CHECK(with_dichotomy > 0);
  CHECK(truncations > 0);
}
