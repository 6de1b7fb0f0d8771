#include "seqnet/json_io.hpp"

namespace seqnet {

using nlohmann::json;

json network_json(const ReactionNetwork& net) {
  json doc;
  doc["schema"] = kSchema;
  doc["species"] = json::array();
  for (const Species& s : net.species()) doc["species"].push_back({{"index", s.index}, {"name", s.name}});
  doc["reactions"] = json::array();
  for (const Reaction& rx : net.reactions()) {
    json r;
    r["rate_index"] = rx.rate_index;
    r["reactants"] = json::array();
    for (const auto& [i, c] : rx.reactants) r["reactants"].push_back({{"species", i}, {"coeff", c}});
    r["products"] = json::array();
    for (const auto& [i, c] : rx.products) r["products"].push_back({{"species", i}, {"coeff", c}});
    doc["reactions"].push_back(std::move(r));
  }
  if (net.tag()) {
    doc["tag"] = {{"m", net.tag()->m}, {"n", net.tag()->n}, {"fully_open", net.tag()->fully_open}};
  }
  return doc;
}

json region_json(const RegionCheck& check) {
  json doc;
  doc["schema"] = kSchema;
  doc["theorem"] = to_string(check.theorem);
  doc["all_satisfied"] = check.all_satisfied;
  doc["records"] = json::array();
  for (const InequalityRecord& rec : check.records) {
    const char* strictness = rec.strictness == Strictness::Strict
                                 ? ">"
                                 : (rec.strictness == Strictness::NonStrict ? ">=" : "!=");
    doc["records"].push_back({{"id", rec.label()},
                              {"lhs", to_double(rec.lhs)},
                              {"rhs", to_double(rec.rhs)},
                              {"lhs_exact", to_string(rec.lhs)},
                              {"rhs_exact", to_string(rec.rhs)},
                              {"relation", strictness},
                              {"satisfied", rec.satisfied}});
  }
  return doc;
}

json report_json(const StabilityReport& report) {
  json doc;
  doc["schema"] = kSchema;
  doc["verdict"] = to_string(report.verdict);
  doc["dominant_margin"] = report.dominant_margin;
  doc["exact_certificate"] = report.exact_certificate;
  doc["eigenvalues"] = json::array();
  for (const auto& ev : report.eigenvalues) doc["eigenvalues"].push_back({ev.real(), ev.imag()});
  doc["discs"] = json::array();
  for (const GershgorinDisc& d : report.discs)
    doc["discs"].push_back({{"center", d.center},
                            {"radius", d.radius},
                            {"mode", d.mode == DiscMode::Row ? "row" : "column"},
                            {"index", d.index}});
  if (report.scaling) doc["scaling"] = *report.scaling;
  return doc;
}

json state_json(const SteadyState& state) {
  return json{{"x", state.x},
              {"residual", state.residual_norm},
              {"detJ", state.det_jacobian},
              {"nondegenerate", state.nondegenerate},
              {"branch", to_string(state.branch)},
              {"eps", state.eps}};
}

json witness_json(const WitnessResult& result) {
  json doc;
  doc["schema"] = kSchema;
  doc["m"] = result.params.m;
  doc["n"] = result.params.n;
  doc["bistable"] = result.bistable;
  doc["eps"] = to_double(result.eps);
  doc["eps_exact"] = to_string(result.eps);
  if (result.rates) {
    doc["r"] = result.rates->as_doubles();
    json exact = json::array();
    for (const Rational& q : result.rates->values()) exact.push_back(to_string(q));
    doc["r_exact"] = std::move(exact);
  }
  doc["region"] = region_json(result.region);
  doc["states"] = json::array();
  for (const SteadyState& st : result.states) doc["states"].push_back(state_json(st));
  doc["reports"] = json::array();
  for (const StabilityReport& rep : result.reports) doc["reports"].push_back(report_json(rep));
  doc["trace"] = json::array();
  for (const auto& [eps, ok] : result.eps_trace) doc["trace"].push_back({{"eps", eps}, {"bistable", ok}});
  if (!result.failure.empty()) doc["failure"] = result.failure;
  return doc;
}

json sweep_json(const std::vector<SweepSummary>& summaries) {
  json doc;
  doc["schema"] = kSchema;
  doc["cells"] = json::array();
  for (const SweepSummary& s : summaries) {
    json cell{{"m", s.params.m},
              {"n", s.params.n},
              {"valid", s.valid},
              {"bistable", s.bistable},
              {"eps", s.eps},
              {"states_found", s.states_found},
              {"stable_count", s.stable_count},
              {"nondegenerate_count", s.nondegenerate_count}};
    if (!s.error.empty()) cell["error"] = s.error;
    doc["cells"].push_back(std::move(cell));
  }
  return doc;
}

WitnessReload witness_reload(const json& doc) {
  if (!doc.contains("schema") || doc["schema"] != kSchema)
    throw std::invalid_argument("witness_reload: unknown schema");
  WitnessReload out;
  out.params = {doc.at("m").get<int>(), doc.at("n").get<int>()};
  out.bistable = doc.at("bistable").get<bool>();
  if (doc.contains("eps_exact")) {
    auto q = parse_rational(doc["eps_exact"].get<std::string>());
    if (!q) throw std::invalid_argument("witness_reload: bad eps_exact");
    out.eps = *q;
  } else {
    out.eps = rational_of(doc.at("eps").get<double>());
  }
  if (doc.contains("r_exact")) {
    for (const auto& entry : doc["r_exact"]) {
      auto q = parse_rational(entry.get<std::string>());
      if (!q) throw std::invalid_argument("witness_reload: bad r_exact entry");
      out.rates.push_back(*q);
    }
  } else if (doc.contains("r")) {
    for (double v : doc["r"].get<std::vector<double>>()) out.rates.push_back(rational_of(v));
  }
  for (const auto& st : doc.at("states")) {
    out.states.push_back(st.at("x").get<std::vector<double>>());
    out.branches.push_back(st.at("branch").get<std::string>());
  }
  return out;
}

}  // namespace seqnet
