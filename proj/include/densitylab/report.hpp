#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "densitylab/configuration.hpp"
#include "densitylab/constructions.hpp"
#include "densitylab/optimizer.hpp"
#include "densitylab/oracles.hpp"
#include "densitylab/profile.hpp"

namespace dlab {

// All JSON here uses std::map-backed objects, so keys come out sorted and a
// given value always serializes to the same bytes. Rationals are canonical
// "p/q" strings; `_dec` siblings carry decimal renderings for convenience.

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

/// {"intervals": [["a1","b1"], ...]}
Json config_to_json(const Configuration& c);
/// Endpoints may be strings ("p/q" or decimal) or JSON numbers (read from
/// their literal text, so 0.1 means 1/10).
Configuration config_from_json(const Json& j);
Configuration parse_config(std::string_view text);
/// Reads a configuration file, or stdin for "-".
Configuration read_config(const std::string& path);
std::string read_text(const std::string& path);

std::string fnv1a_hex(std::string_view bytes);

struct AnalysisReport {
  Configuration config;
  Rational delta_star{};
  std::size_t argmin = 0;  // endpoint index with the smallest escape
  std::vector<EndpointStats> stats{};
  std::optional<Rational> delta{};
  std::optional<CounterexampleDecision> decision{};
  std::string version = kToolVersion;
  std::string input_hash{};  // FNV-1a of the canonical configuration JSON
};

AnalysisReport analyze(const Configuration& c, const std::optional<Rational>& delta = std::nullopt);
Json to_json(const AnalysisReport& r);
AnalysisReport analysis_from_json(const Json& j);

Json to_json(const Endpoint& e);
Endpoint endpoint_from_json(const Json& j);
Json to_json(const EndpointStats& s);
EndpointStats stats_from_json(const Json& j);
Json to_json(const ColoredEndpoint& c);
Json to_json(const Check& c);
Json to_json(const ProofInspection& insp);
/// The DIAGNOSTIC checks only, as {name: {passed, lhs, relation, rhs, detail}}.
Json diagnostics_json(const ProofInspection& insp);
Json to_json(const Lemma2Report& r);
Json to_json(const ChainReport& r);
Json to_json(const Lemma1Suite& s);
Json to_json(const SearchResult& r);
Json to_json(const NeighborhoodAudit& a);
Json to_json(const CmsnTableRow& row);
Json to_json(const BoundConstant& c);
Json to_json(const TailReport& t);
Json to_json(const IntervalSet& s);

/// restart,iteration,incumbent
void write_trace_csv(std::ostream& out, const SearchResult& r);

}  // namespace dlab
