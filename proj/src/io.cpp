#include "nif/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nif {

namespace {

using json = nlohmann::ordered_json;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CostFunction parse_cost(const json& j, const char* where) {
  if (!j.is_object() || !j.contains("a") || !j.contains("k"))
    throw SchemaError(std::string(where) + ": cost must be {a, k}");
  try {
    return CostFunction::monomial(j.at("a").get<double>(),
                                  j.at("k").get<double>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(where) + ": " + e.what());
  }
}

json dump_cost(const CostFunction& c) {
  if (!c.is_monomial())
    throw SchemaError("serialize: only monomial costs are representable");
  return json{{"a", c.coefficient()}, {"k", c.degree()}};
}

Exponent parse_exponent(const json& j, const char* name) {
  if (j.is_string()) {
    if (j.get<std::string>() == "limit") return Exponent::limit();
    throw SchemaError(std::string("aggregator.") + name +
                      ": expected integer or \"limit\"");
  }
  if (!j.is_number_integer() || j.get<int>() < 1)
    throw SchemaError(std::string("aggregator.") + name +
                      ": expected integer >= 1 or \"limit\"");
  return Exponent::finite(j.get<int>());
}

json dump_exponent(Exponent e) {
  if (e.is_limit) return "limit";
  return e.value;
}

EntropyModel parse_entropy(const json& j) {
  if (!j.is_object()) throw SchemaError("entropy: expected an object");
  if (j.contains("identical")) {
    const auto& v = j.at("identical");
    if (!j.contains("num_sources"))
      throw SchemaError("entropy.identical: requires num_sources");
    return EntropyModel::identical(j.at("num_sources").get<int>(),
                                   v.get<double>());
  }
  if (j.contains("independent")) {
    const auto& arr = j.at("independent");
    if (!arr.is_array() || arr.empty())
      throw SchemaError("entropy.independent: expected a nonempty array");
    Eigen::VectorXd h(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) h[i] = arr[i].get<double>();
    return EntropyModel::independent(h);
  }
  if (j.contains("table")) {
    if (!j.contains("num_sources"))
      throw SchemaError("entropy.table: requires num_sources");
    const int n = j.at("num_sources").get<int>();
    if (n < 1 || n > kMaxSources)
      throw SchemaError("entropy: num_sources out of range");
    std::vector<double> table(subset_count(n),
                              std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : j.at("table")) {
      if (!row.is_array() || row.size() != 2)
        throw SchemaError("entropy.table: rows must be [mask, value]");
      const auto mask = row[0].get<std::int64_t>();
      if (mask < 0 || mask >= static_cast<std::int64_t>(subset_count(n)))
        throw SchemaError("entropy.table: subset mask out of range");
      table[static_cast<Subset>(mask)] = row[1].get<double>();
    }
    for (Subset a = 0; a < subset_count(n); ++a)
      if (std::isnan(table[a]))
        throw SchemaError("entropy.table: missing entry for subset mask " +
                          std::to_string(a));
    try {
      return EntropyModel(n, std::move(table));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("entropy: ") + e.what());
    }
  }
  throw SchemaError("entropy: expected identical, independent or table form");
}

json dump_entropy(const EntropyModel& m) {
  json rows = json::array();
  for (Subset a = 0; a < subset_count(m.num_sources()); ++a)
    rows.push_back(json::array({a, m.entropy(a)}));
  return json{{"num_sources", m.num_sources()}, {"table", std::move(rows)}};
}

// JSON has no inf literal; divergent residuals (limit-mode comparisons
// whose slopes already violate the inequality) become the string "inf".
json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json condition_json(const ConditionReport& rep) {
  json j;
  j["pass"] = rep.passed();
  j["tolerance"] = rep.tolerance;
  for (int k = 0; k < 4; ++k) {
    json c;
    c["residual"] = number_or_inf(rep.residual[k]);
    c["pass"] = rep.pass[k];
    j["conditions"].push_back(std::move(c));
  }
  j["social_cost"] = rep.social_cost;
  j["terminal_costs"] = std::vector<double>(
      rep.terminal_costs.data(),
      rep.terminal_costs.data() + rep.terminal_costs.size());
  j["condition4_pairs"] = rep.condition4_pairs;
  if (!std::isnan(rep.condition4_min_ratio))
    j["condition4_min_ratio"] = rep.condition4_min_ratio;
  return j;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("instance: invalid JSON: ") + e.what());
  }
  try {
    for (const char* key :
         {"nodes", "edges", "sources", "terminals", "entropy"})
      if (!j.contains(key))
        throw SchemaError(std::string("instance: missing field '") + key +
                          "'");

    std::vector<std::string> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(n.get<std::string>());
    auto node_index = [&](const std::string& name, const char* where) {
      for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == name) return static_cast<int>(i);
      throw SchemaError(std::string(where) + ": unknown node '" + name + "'");
    };

    std::vector<Edge> edges;
    std::vector<CostFunction> edge_costs;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at("id").get<std::string>(),
                       node_index(e.at("tail").get<std::string>(), "edge"),
                       node_index(e.at("head").get<std::string>(), "edge")});
      edge_costs.push_back(parse_cost(e.at("cost"), "edge"));
    }

    std::vector<int> sources;
    std::vector<CostFunction> source_costs;
    for (const auto& s : j.at("sources")) {
      sources.push_back(
          node_index(s.at("node").get<std::string>(), "source"));
      source_costs.push_back(parse_cost(s.at("cost"), "source"));
    }
    std::vector<int> terminals;
    for (const auto& t : j.at("terminals"))
      terminals.push_back(node_index(t.get<std::string>(), "terminal"));

    EntropyModel entropy = parse_entropy(j.at("entropy"));
    const ValidationReport val = validate(entropy);
    if (!val.ok)
      throw SchemaError("entropy: " +
                        val.violation->describe(entropy.num_sources()));

    AggregatorConfig agg;
    if (j.contains("aggregator")) {
      agg.edge = parse_exponent(j.at("aggregator").at("n"), "n");
      agg.source = parse_exponent(j.at("aggregator").at("m"), "m");
    }
    SplittingConfig split;
    if (j.contains("splitting")) {
      const auto& sp = j.at("splitting");
      if (sp.contains("edge") && sp.at("edge").get<std::string>() != "power")
        throw SchemaError("splitting.edge: only 'power' is defined");
      if (sp.contains("source")) {
        const std::string rule = sp.at("source").get<std::string>();
        if (rule == "uniform")
          split.source = SourceSplit::Uniform;
        else if (rule == "power")
          split.source = SourceSplit::Power;
        else
          throw SchemaError("splitting.source: expected uniform or power");
      }
    }
    return Instance(Network(std::move(nodes), std::move(edges),
                            std::move(sources), std::move(terminals)),
                    std::move(edge_costs), std::move(source_costs),
                    std::move(entropy), agg, split);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("instance: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("instance: ") + e.what());
  }
}

std::string serialize_instance(const Instance& inst) {
  json j;
  j["nodes"] = inst.network.nodes();
  j["edges"] = json::array();
  for (int e = 0; e < inst.num_edges(); ++e) {
    const Edge& edge = inst.network.edges()[e];
    j["edges"].push_back(
        json{{"id", edge.id},
             {"tail", inst.network.node_name(edge.tail)},
             {"head", inst.network.node_name(edge.head)},
             {"cost", dump_cost(inst.edge_costs[e])}});
  }
  j["sources"] = json::array();
  for (int s = 0; s < inst.num_sources(); ++s)
    j["sources"].push_back(
        json{{"node", inst.network.node_name(inst.network.sources()[s])},
             {"cost", dump_cost(inst.source_costs[s])}});
  j["terminals"] = json::array();
  for (int t : inst.network.terminals())
    j["terminals"].push_back(inst.network.node_name(t));
  j["entropy"] = dump_entropy(inst.entropy);
  j["aggregator"] = json{{"n", dump_exponent(inst.aggregator.edge)},
                         {"m", dump_exponent(inst.aggregator.source)}};
  j["splitting"] =
      json{{"edge", "power"},
           {"source", inst.splitting.source == SourceSplit::Uniform
                          ? "uniform"
                          : "power"}};
  return j.dump(2) + "\n";
}

bool instances_equal(const Instance& a, const Instance& b) {
  return a.network == b.network && a.edge_costs == b.edge_costs &&
         a.source_costs == b.source_costs && a.entropy == b.entropy &&
         a.aggregator == b.aggregator && a.splitting == b.splitting;
}

FlowRate parse_flow_rate(const std::string& text, const Instance& inst) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("flow-rate: invalid JSON: ") + e.what());
  }
  try {
    FlowRate fr = zero_flow_rate(inst);
    const auto& flows = j.at("path_flows");
    if (static_cast<int>(flows.size()) != inst.paths.num_paths())
      throw SchemaError(
          "flow-rate: path_flows must have one entry per enumerated path (" +
          std::to_string(inst.paths.num_paths()) + ")");
    for (int p = 0; p < inst.paths.num_paths(); ++p)
      fr.path_flows[p] = flows[p].get<double>();
    const auto& rates = j.at("rates");
    if (static_cast<int>(rates.size()) != inst.num_sources())
      throw SchemaError("flow-rate: rates must have one row per source");
    for (int s = 0; s < inst.num_sources(); ++s) {
      if (static_cast<int>(rates[s].size()) != inst.num_terminals())
        throw SchemaError(
            "flow-rate: rate rows must have one entry per terminal");
      for (int t = 0; t < inst.num_terminals(); ++t)
        fr.rates(s, t) = rates[s][t].get<double>();
    }
    for (int p = 0; p < fr.path_flows.size(); ++p)
      if (!std::isfinite(fr.path_flows[p]) || fr.path_flows[p] < 0.0)
        throw SchemaError("flow-rate: flows must be finite and nonnegative");
    for (int s = 0; s < inst.num_sources(); ++s)
      for (int t = 0; t < inst.num_terminals(); ++t)
        if (!std::isfinite(fr.rates(s, t)) || fr.rates(s, t) < 0.0)
          throw SchemaError("flow-rate: rates must be finite and nonnegative");
    return fr;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("flow-rate: ") + e.what());
  }
}

std::string serialize_flow_rate(const FlowRate& fr, const Instance& inst) {
  json j;
  j["path_flows"] = std::vector<double>(
      fr.path_flows.data(), fr.path_flows.data() + fr.path_flows.size());
  j["rates"] = json::array();
  for (int s = 0; s < inst.num_sources(); ++s) {
    std::vector<double> row(inst.num_terminals());
    for (int t = 0; t < inst.num_terminals(); ++t) row[t] = fr.rates(s, t);
    j["rates"].push_back(row);
  }
  // Reference echo of the path indexing.
  j["paths"] = json::array();
  for (const Path& p : inst.paths.paths()) {
    json row;
    row["source"] =
        inst.network.node_name(inst.network.sources()[p.source]);
    row["terminal"] =
        inst.network.node_name(inst.network.terminals()[p.terminal]);
    json ids = json::array();
    for (int e : p.edges) ids.push_back(inst.network.edges()[e].id);
    row["edges"] = std::move(ids);
    j["paths"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string emit_report(const PoaResult& result, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["descriptor"] = result.descriptor;
    j["wardrop_cost"] = result.wardrop_cost;
    j["opt_cost"] = result.opt_cost;
    j["ratio"] = result.ratio;
    if (result.bound_applicable) j["upper_bound"] = result.upper_bound;
    j["wardrop_cost_solve"] = result.wardrop_cost_solve;
    j["opt_cost_solve"] = result.opt_cost_solve;
    j["ratio_solve"] = result.ratio_solve;
    j["wardrop_gap"] = result.wardrop_gap;
    j["opt_gap"] = result.opt_gap;
    j["wardrop_mean_rates"] = std::vector<double>(
        result.wardrop_mean_rates.data(),
        result.wardrop_mean_rates.data() + result.wardrop_mean_rates.size());
    j["opt_mean_rates"] = std::vector<double>(
        result.opt_mean_rates.data(),
        result.opt_mean_rates.data() + result.opt_mean_rates.size());
    j["nonunique_flag"] = result.nonunique_flag;
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "descriptor,wardrop_cost,opt_cost,ratio,bound,flags\n";
    out << result.descriptor << "," << fmt_full(result.wardrop_cost) << ","
        << fmt_full(result.opt_cost) << "," << fmt_full(result.ratio) << ","
        << (result.bound_applicable ? fmt_full(result.upper_bound) : "") << ","
        << (result.nonunique_flag ? "nonunique-k1" : "") << "\n";
    return out.str();
  }
  std::ostringstream out;
  out << "price of anarchy  [" << result.descriptor << "]\n";
  out << "  wardrop cost (limit): " << fmt6(result.wardrop_cost) << "\n";
  out << "  opt cost     (limit): " << fmt6(result.opt_cost) << "\n";
  out << "  ratio               : " << fmt6(result.ratio) << "\n";
  if (result.bound_applicable)
    out << "  upper bound         : " << fmt6(result.upper_bound) << "\n";
  out << "  wardrop cost (solve): " << fmt6(result.wardrop_cost_solve)
      << "  gap " << fmt6(result.wardrop_gap) << "\n";
  out << "  opt cost     (solve): " << fmt6(result.opt_cost_solve) << "  gap "
      << fmt6(result.opt_gap) << "\n";
  out << "  wardrop mean rates  :";
  for (int s = 0; s < result.wardrop_mean_rates.size(); ++s)
    out << " " << fmt6(result.wardrop_mean_rates[s]);
  out << "\n  opt mean rates      :";
  for (int s = 0; s < result.opt_mean_rates.size(); ++s)
    out << " " << fmt6(result.opt_mean_rates[s]);
  out << "\n";
  if (result.nonunique_flag)
    out << "  note: degree-1 edge costs; equilibrium need not be unique\n";
  return out.str();
}

std::string emit_report(const ConditionReport& rep, ReportFormat format) {
  if (format == ReportFormat::Json) return condition_json(rep).dump(2) + "\n";
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "condition,residual,pass\n";
    for (int k = 0; k < 4; ++k)
      out << (k + 1) << "," << fmt_full(rep.residual[k]) << ","
          << (rep.pass[k] ? 1 : 0) << "\n";
    return out.str();
  }
  std::ostringstream out;
  out << "condition check: " << (rep.passed() ? "PASS" : "FAIL")
      << "  (tol " << fmt6(rep.tolerance) << ")\n";
  static const char* names[4] = {
      "(1) flows cover rates ", "(2) rates sum to H(S) ",
      "(3) path cost ordering", "(4) rate-flow exchange"};
  for (int k = 0; k < 4; ++k)
    out << "  " << names[k] << "  residual " << fmt6(rep.residual[k]) << "  "
        << (rep.pass[k] ? "pass" : "FAIL") << "\n";
  out << "  social cost " << fmt6(rep.social_cost) << "\n";
  if (rep.condition4_pairs > 0 && !std::isnan(rep.condition4_min_ratio))
    out << "  condition-4 pairs " << rep.condition4_pairs << ", min ratio "
        << fmt6(rep.condition4_min_ratio) << "\n";
  return out.str();
}

std::string emit_report(const SolveResult& result, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["cost"] = result.cost;
    j["gap"] = result.gap;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::Csv) {
    std::ostringstream out;
    out << "cost,gap,iterations,converged\n"
        << fmt_full(result.cost) << "," << fmt_full(result.gap) << ","
        << result.iterations << "," << (result.converged ? 1 : 0) << "\n";
    return out.str();
  }
  std::ostringstream out;
  out << "solve: cost " << fmt6(result.cost) << ", gap " << fmt6(result.gap)
      << ", " << result.iterations << " iterations, "
      << (result.converged ? "converged" : "NOT converged") << "\n";
  return out.str();
}

std::string emit_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "family,params,wardrop_cost,opt_cost,ratio,bound,flags\n";
  for (const auto& r : rows)
    out << r.family << "," << r.params << "," << fmt_full(r.wardrop_cost)
        << "," << fmt_full(r.opt_cost) << "," << fmt_full(r.ratio) << ","
        << fmt_full(r.bound) << "," << r.flags << "\n";
  return out.str();
}

std::string emit_trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "iteration,cost,gap\n";
  for (const auto& r : rows)
    out << r.iteration << "," << fmt_full(r.cost) << "," << fmt_full(r.gap)
        << "\n";
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write to " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nif
