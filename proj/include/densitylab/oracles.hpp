#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "densitylab/configuration.hpp"
#include "densitylab/profile.hpp"

namespace dlab {

struct HypothesisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A host interval written as a (not necessarily disjoint) union of intervals,
/// together with a finite union B.
struct CoverSystem {
  Interval host;
  std::vector<Interval> cover;
  IntervalSet b;
};

/// Throws HypothesisError unless the cover is exactly the host.
void validate_cover(const CoverSystem& sys);

/// Sorted minimal sub-cover: left endpoints increase and I_j ∩ I_{j+2} = ∅.
std::vector<Interval> canonicalize_cover(const CoverSystem& sys);

struct Lemma1Report {
  Rational density;  // λ(B | host)
  Rational bound;    // (1-δ)/(1+δ)
  bool holds = false;
  std::vector<Interval> canonical;
  // Chain parameters of the canonical cover.
  Rational x, y, x_b, y_b;
  Rational averaged;  // (2x^B + y^B) / (2x + y)
  bool averaged_holds = false;  // averaged >= 1 - δ
  Rational slack() const { return density - bound; }
};

/// Requires λ(B | I_j) >= 1 - δ for every cover interval (else HypothesisError).
Lemma1Report lemma1_check(const CoverSystem& sys, const Rational& delta);

struct Remark5Report {
  Rational density;
  Rational bound;  // 1/(1+2δ)
  bool holds = false;
};

Remark5Report remark5_experiment(const CoverSystem& sys, const Rational& delta);

/// Random system on (0,1) satisfying the Lemma 1 hypothesis with per-interval
/// densities biased into [1-δ, 1-δ+0.02], plus shuffled redundant intervals.
CoverSystem random_cover_system(std::mt19937_64& rng, const Rational& delta);

struct Lemma1Suite {
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  std::uint64_t averaged_violations = 0;
  Rational min_slack;
  std::uint64_t worst_trial = 0;
};

/// Trial t uses derived_stream(seed, t); trials run concurrently.
Lemma1Suite run_lemma1_suite(std::uint64_t trials, const Rational& delta, std::uint64_t seed);

// --------------------------------------------------------- proof machinery

enum class CheckKind { Asserted, Diagnostic };
const char* to_string(CheckKind k);

struct Check {
  std::string name;
  CheckKind kind = CheckKind::Asserted;
  bool applicable = true;
  bool passed = false;
  std::string lhs;
  std::string relation;
  std::string rhs;
  std::string detail;
};

struct ProofInspection {
  Rational delta{};
  Rational scale{};  // the input was multiplied by this to make b_r = 1
  Configuration config;
  Rational delta_star{};
  std::vector<ColoredEndpoint> colored{};  // indexed like config.endpoints()
  std::vector<EndpointStats> stats{};
  Rational rho{};
  std::optional<Rational> v_black{};
  std::optional<Rational> v_white{};
  std::optional<Interval> i_circ{};
  std::vector<Endpoint> f{};
  std::map<std::size_t, Rational> mu_map{};  // endpoint index -> μ
  IntervalSet phi_black1{}, phi_black2{}, phi_black{};
  IntervalSet phi_white1{}, phi_white2{}, phi_white{};
  std::vector<Check> checks{};
  bool complete = false;
  std::string reason{};

  bool asserted_ok() const;
  const Check* find(const std::string& name) const;
};

struct InspectionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Throws InspectionError when δ <= δ*(C) or δ >= 1/2.
ProofInspection proof_inspect(const Configuration& c, const Rational& delta);

struct Lemma2Claim {
  Rational v;
  Rational omega_v;
  Rational gap_density;  // λ(C | (cut, v + ω(v)))
  bool gap_ok = false;   // < 1 - 2δ
  Rational new_density;  // λ(C_cut | I_{cut - v}(v))
  bool new_ok = false;   // > 1 - δ
};

struct Lemma2Report {
  Endpoint endpoint;
  Color color = Color::Black;
  bool mirrored = false;  // analysis ran on mirror(C) at 1 - p
  Rational omega_p;
  bool dichotomy_holds = false;
  bool truncated = false;
  Rational cut;                // p + ω(p) in working coordinates
  bool cut_in_gap_closure = false;
  std::optional<Configuration> truncated_config;
  bool truncated_is_counterexample = false;
  std::vector<Lemma2Claim> claims;
};

/// p must be black with p <= 1/2 or white with p >= 1/2 (after normalizing b_r = 1).
Lemma2Report lemma2_probe(const Configuration& c, const Rational& delta, const Endpoint& p);

struct ChainStep {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds = false;  // lhs >= rhs
  Rational slack() const { return lhs - rhs; }
};

struct ChainReport {
  std::vector<ChainStep> steps;
  Rational polynomial;  // 4δ^3 + 2δ^2 + 3δ
  bool polynomial_at_least_one = false;
};

ChainReport final_inequality_chain(const ProofInspection& insp);

}  // namespace dlab
