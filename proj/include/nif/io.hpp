#pragma once

#include <stdexcept>
#include <string>

#include "nif/anarchy.hpp"
#include "nif/conditions.hpp"
#include "nif/instance.hpp"
#include "nif/kkt.hpp"
#include "nif/solve.hpp"

namespace nif {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance document: {nodes, edges:[{id,tail,head,cost:{a,k}}],
/// sources:[{node,cost:{a,k}}], terminals, entropy, aggregator:{n,m},
/// splitting:{edge,source}}. entropy is {"identical":h},
/// {"independent":[h...]} or {"table":[[mask,H]...]}; n/m are integers or
/// "limit". parse(serialize(x)) == x structurally for every valid x.
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

bool instances_equal(const Instance& a, const Instance& b);

/// Flow-rate document: {"path_flows":[...], "rates":[[per-source row]...]};
/// serialization echoes the path table (edge-id sequences) for reference.
FlowRate parse_flow_rate(const std::string& text, const Instance& inst);
std::string serialize_flow_rate(const FlowRate& fr, const Instance& inst);

enum class ReportFormat { Human, Csv, Json };

/// Deterministic renderings: 6 significant digits in human tables, full
/// precision in CSV/JSON. Same result, same bytes.
std::string emit_report(const PoaResult& result, ReportFormat format);
std::string emit_report(const ConditionReport& report, ReportFormat format);
std::string emit_report(const SolveResult& result, ReportFormat format);
std::string emit_sweep_csv(const std::vector<SweepRow>& rows);
std::string emit_trace_csv(const std::vector<TraceRow>& rows);

/// Write-to-temp-then-rename so a crash never leaves a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace nif
