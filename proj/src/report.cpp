#include "densitylab/report.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace dlab {
namespace {

void put(Json& j, const std::string& key, const Rational& q) {
  j[key] = to_string(q);
  j[key + "_dec"] = to_decimal(q);
}

void put(Json& j, const std::string& key, const std::optional<Rational>& q) {
  if (q)
    put(j, key, *q);
  else
    j[key] = nullptr;
}

Rational rational_at(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ParseError("missing field '" + key + "'");
  const Json& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParseError("field '" + key + "' is not a rational");
}

std::optional<Rational> optional_rational_at(const Json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return rational_at(j, key);
}

Rational rational_value(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return parse_rational(v.dump());
  throw ParseError("endpoint is neither a string nor a number");
}

Json interval_json(const Interval& iv) { return Json::array({to_string(iv.lo), to_string(iv.hi)}); }

}  // namespace

Json config_to_json(const Configuration& c) {
  Json ivs = Json::array();
  for (const auto& iv : c.intervals()) ivs.push_back(interval_json(iv));
  return Json{{"intervals", ivs}};
}

Configuration config_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j.at("intervals").is_array())
    throw ParseError("configuration JSON needs an \"intervals\" array");
  std::vector<std::pair<Rational, Rational>> raw;
  for (const auto& pair : j.at("intervals")) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("each interval must be a [lo, hi] pair");
    raw.emplace_back(rational_value(pair[0]), rational_value(pair[1]));
  }
  return make_configuration(std::move(raw));
}

Configuration parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Configuration read_config(const std::string& path) { return parse_config(read_text(path)); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
  return out;
}

// ------------------------------------------------------------- analysis

AnalysisReport analyze(const Configuration& c, const std::optional<Rational>& delta) {
  AnalysisReport r{.config = c};
  auto [ds, arg] = delta_star_with_argmin(c);
  r.delta_star = ds;
  r.argmin = arg;
  r.stats = all_extrema(c);
  if (delta) {
    r.delta = *delta;
    r.decision = is_counterexample(c, *delta);
  }
  r.input_hash = fnv1a_hex(config_to_json(c).dump());
  return r;
}

Json to_json(const Endpoint& e) {
  Json j;
  put(j, "value", e.value);
  j["kind"] = to_string(e.kind);
  j["index"] = e.index;
  return j;
}

Endpoint endpoint_from_json(const Json& j) {
  Endpoint e;
  e.value = rational_at(j, "value");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == to_string(EndpointKind::Zero))
    e.kind = EndpointKind::Zero;
  else if (kind == to_string(EndpointKind::Left))
    e.kind = EndpointKind::Left;
  else if (kind == to_string(EndpointKind::Right))
    e.kind = EndpointKind::Right;
  else
    throw ParseError("unknown endpoint kind '" + kind + "'");
  e.index = j.at("index").get<std::size_t>();
  return e;
}

Json to_json(const EndpointStats& s) {
  Json j;
  j["endpoint"] = to_json(s.endpoint);
  put(j, "sup_density", s.sup_density);
  put(j, "inf_density", s.inf_density);
  put(j, "sup_radius", s.sup_radius);
  put(j, "inf_radius", s.inf_radius);
  put(j, "escape", s.escape);
  return j;
}

EndpointStats stats_from_json(const Json& j) {
  EndpointStats s;
  s.endpoint = endpoint_from_json(j.at("endpoint"));
  s.sup_density = rational_at(j, "sup_density");
  s.inf_density = rational_at(j, "inf_density");
  s.sup_radius = optional_rational_at(j, "sup_radius");
  s.inf_radius = optional_rational_at(j, "inf_radius");
  s.escape = rational_at(j, "escape");
  return s;
}

Json to_json(const AnalysisReport& r) {
  Json j;
  j["configuration"] = config_to_json(r.config);
  put(j, "delta_star", r.delta_star);
  j["argmin_endpoint"] = r.argmin;
  Json stats = Json::array();
  for (const auto& s : r.stats) stats.push_back(to_json(s));
  j["endpoints"] = stats;
  put(j, "delta", r.delta);
  if (r.decision) {
    Json d;
    d["refutes"] = r.decision->refutes;
    Json w = Json::object();
    for (const auto& [idx, radius] : r.decision->witnesses) w[std::to_string(idx)] = to_string(radius);
    d["witnesses"] = w;
    j["decision"] = d;
  } else {
    j["decision"] = nullptr;
  }
  j["version"] = r.version;
  j["input_hash"] = r.input_hash;
  return j;
}

AnalysisReport analysis_from_json(const Json& j) {
  AnalysisReport r{.config = config_from_json(j.at("configuration"))};
  r.delta_star = rational_at(j, "delta_star");
  r.argmin = j.at("argmin_endpoint").get<std::size_t>();
  for (const auto& s : j.at("endpoints")) r.stats.push_back(stats_from_json(s));
  r.delta = optional_rational_at(j, "delta");
  if (j.contains("decision") && !j.at("decision").is_null()) {
    CounterexampleDecision d;
    d.refutes = j.at("decision").at("refutes").get<bool>();
    for (const auto& [k, v] : j.at("decision").at("witnesses").items())
      d.witnesses.emplace(std::stoul(k), parse_rational(v.get<std::string>()));
    r.decision = std::move(d);
  }
  r.version = j.at("version").get<std::string>();
  r.input_hash = j.at("input_hash").get<std::string>();
  return r;
}

// --------------------------------------------------------------- oracles

Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& iv : s.parts()) a.push_back(interval_json(iv));
  return a;
}

Json to_json(const ColoredEndpoint& c) {
  Json j;
  j["endpoint"] = to_json(c.endpoint);
  put(j, "omega", c.omega_p);
  j["color"] = to_string(c.color);
  put(j, "density_at_omega", c.density_at_omega);
  put(j, "omega_high", c.omega_high);
  put(j, "omega_low", c.omega_low);
  j["two_sided"] = c.two_sided();
  return j;
}

Json to_json(const Check& c) {
  return Json{{"name", c.name},     {"kind", to_string(c.kind)}, {"applicable", c.applicable},
              {"passed", c.passed}, {"lhs", c.lhs},              {"relation", c.relation},
              {"rhs", c.rhs},       {"detail", c.detail}};
}

Json to_json(const ProofInspection& insp) {
  Json j;
  put(j, "delta", insp.delta);
  put(j, "scale", insp.scale);
  j["configuration"] = config_to_json(insp.config);
  put(j, "delta_star", insp.delta_star);
  put(j, "rho", insp.rho);
  put(j, "v_black", insp.v_black);
  put(j, "v_white", insp.v_white);
  j["i_circ"] = insp.i_circ ? interval_json(*insp.i_circ) : Json(nullptr);
  Json f = Json::array();
  for (const auto& e : insp.f) f.push_back(to_string(e.value));
  j["F"] = f;
  Json mu = Json::object();
  for (const auto& [idx, m] : insp.mu_map) mu[to_string(insp.config.endpoint(idx).value)] = to_string(m);
  j["mu"] = mu;
  j["phi_black_balls"] = to_json(insp.phi_black1);
  j["phi_black_cells"] = to_json(insp.phi_black2);
  j["phi_black"] = to_json(insp.phi_black);
  j["phi_white_balls"] = to_json(insp.phi_white1);
  j["phi_white_cells"] = to_json(insp.phi_white2);
  j["phi_white"] = to_json(insp.phi_white);
  Json colored = Json::array();
  for (const auto& c : insp.colored) colored.push_back(to_json(c));
  j["endpoints"] = colored;
  Json checks = Json::array();
  for (const auto& c : insp.checks) checks.push_back(to_json(c));
  j["checks"] = checks;
  j["complete"] = insp.complete;
  j["reason"] = insp.reason;
  j["asserted_ok"] = insp.asserted_ok();
  return j;
}

Json diagnostics_json(const ProofInspection& insp) {
  Json j = Json::object();
  for (const auto& c : insp.checks) {
    if (c.kind != CheckKind::Diagnostic) continue;
    j[c.name] = Json{{"applicable", c.applicable}, {"passed", c.passed}, {"lhs", c.lhs},
                     {"relation", c.relation},     {"rhs", c.rhs},       {"detail", c.detail}};
  }
  return j;
}

Json to_json(const Lemma2Report& r) {
  Json j;
  j["endpoint"] = to_json(r.endpoint);
  j["color"] = to_string(r.color);
  j["mirrored"] = r.mirrored;
  put(j, "omega", r.omega_p);
  j["dichotomy_holds"] = r.dichotomy_holds;
  j["truncated"] = r.truncated;
  if (r.truncated) {
    put(j, "cut", r.cut);
    j["cut_in_gap_closure"] = r.cut_in_gap_closure;
    j["truncated_configuration"] = r.truncated_config ? config_to_json(*r.truncated_config) : Json(nullptr);
    j["truncated_is_counterexample"] = r.truncated_is_counterexample;
    Json claims = Json::array();
    for (const auto& c : r.claims) {
      Json cj;
      put(cj, "v", c.v);
      put(cj, "omega_v", c.omega_v);
      put(cj, "gap_density", c.gap_density);
      cj["gap_ok"] = c.gap_ok;
      put(cj, "new_density", c.new_density);
      cj["new_ok"] = c.new_ok;
      claims.push_back(cj);
    }
    j["claims"] = claims;
  }
  return j;
}

Json to_json(const ChainReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json sj{{"name", s.name}, {"holds", s.holds}};
    put(sj, "lhs", s.lhs);
    put(sj, "rhs", s.rhs);
    steps.push_back(sj);
  }
  Json j{{"steps", steps}, {"polynomial_at_least_one", r.polynomial_at_least_one}};
  put(j, "polynomial", r.polynomial);
  return j;
}

Json to_json(const Lemma1Suite& s) {
  Json j{{"trials", s.trials},
         {"violations", s.violations},
         {"averaged_violations", s.averaged_violations},
         {"worst_trial", s.worst_trial}};
  put(j, "min_slack", s.min_slack);
  return j;
}

// ------------------------------------------------------------- optimizer

Json to_json(const SearchResult& r) {
  Json j;
  Json coords = Json::array();
  for (double x : r.best_params.coords) coords.push_back(x);
  j["best_params"] = Json{{"r", r.best_params.r}, {"log_increments", coords}};
  j["best_configuration"] = config_to_json(r.best_config);
  j["float_objective"] = r.float_objective;
  put(j, "exact_objective", r.exact_objective);
  j["certification_gap"] = r.certification_gap();
  j["best_restart"] = r.best_restart;
  j["seed"] = r.seed;
  j["iterations"] = r.iterations;
  j["restarts"] = r.trace.size();
  j["certifications"] = r.certifications;
  Json finals = Json::array();
  for (const auto& t : r.trace) finals.push_back(t.incumbent.empty() ? Json(nullptr) : Json(t.incumbent.back()));
  j["final_incumbents"] = finals;
  Json inc = Json::array();
  for (const auto& p : r.incidents) {
    Json pj{{"restart", p.restart}, {"iteration", p.iteration}, {"float_value", p.float_value}};
    put(pj, "exact_value", p.exact_value);
    inc.push_back(pj);
  }
  j["precision_incidents"] = inc;
  return j;
}

Json to_json(const NeighborhoodAudit& a) {
  auto sample = [](const NeighborhoodSample& s) {
    return Json{{"m", s.m}, {"s", s.s}, {"worst", s.worst}, {"min_escape", s.min_escape}};
  };
  Json samples = Json::array();
  for (const auto& s : a.samples) samples.push_back(sample(s));
  return Json{{"center", sample(a.center)},
              {"one_over_m_minus_s", a.first_row},
              {"s_times_m", a.last_row},
              {"one_over_s_minus_one", a.other_rows},
              {"spread", a.spread},
              {"samples", samples},
              {"center_is_max", a.center_is_max}};
}

// --------------------------------------------------------- constructions

Json to_json(const CmsnTableRow& row) {
  Json j{{"row", row.family}};
  put(j, "endpoint", row.endpoint);
  put(j, "radius", row.radius);
  put(j, "twice_density", row.twice_density);
  put(j, "closed_form", row.closed_form);
  put(j, "difference", row.difference());
  return j;
}

Json to_json(const BoundConstant& c) {
  Json poly = Json::array();
  for (const auto& k : c.poly) poly.push_back(to_string(k));
  Json j{{"name", c.name}, {"residual", c.residual}, {"coefficients", poly}};
  j["value"] = to_decimal(c.value, 15);
  j["value_exact"] = to_string(c.value);
  return j;
}

Json to_json(const TailReport& t) {
  Json j{{"level", t.level}, {"m_used", t.m_used}, {"tail_ok", t.tail_ok}, {"density_ok", t.density_ok}};
  put(j, "center", t.center);
  put(j, "omega", t.omega);
  put(j, "window_radius", t.window_radius);
  put(j, "tail_built", t.tail_built);
  put(j, "remainder_bound", t.remainder_bound_valid);
  put(j, "tail_bound", t.tail_bound);
  put(j, "density_n", t.density_n);
  put(j, "density_assembled", t.density_assembled);
  put(j, "density_bound", t.density_bound);
  Json lm = Json::array(), lmw = Json::array();
  for (const auto& m : t.level_masses) lm.push_back(to_string(m));
  for (const auto& m : t.level_masses_in_window) lmw.push_back(to_string(m));
  j["level_masses"] = lm;
  j["level_masses_in_window"] = lmw;
  return j;
}

void write_trace_csv(std::ostream& out, const SearchResult& r) {
  out << "restart,iteration,incumbent\n";
  std::ostringstream line;
  line.precision(17);
  for (const auto& t : r.trace)
    for (std::size_t i = 0; i < t.incumbent.size(); ++i) {
      line.str({});
      line << t.restart << ',' << i + 1 << ',' << t.incumbent[i] << '\n';
      out << line.str();
    }
}

}  // namespace dlab
