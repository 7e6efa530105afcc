#pragma once

// JSON encodings of the result types. Non-finite numbers become the strings
// "inf", "-inf" and "nan" so every report stays valid JSON.

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "varlp/criteria.hpp"
#include "varlp/gurka.hpp"
#include "varlp/harness.hpp"
#include "varlp/luxemburg.hpp"
#include "varlp/operators.hpp"

namespace varlp {

using json = nlohmann::ordered_json;

inline json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

// parses what num() emits
inline double num_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::nan("");
  throw domain_error("not a number: " + s);
}

inline json sampled_json(const std::vector<double>& nodes, const std::vector<double>& values) {
  return {{"nodes", nums(nodes)}, {"values", nums(values)}};
}

inline json sampled_json(const RadialProfile& f, const std::vector<double>& nodes) {
  std::vector<double> v(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f(nodes[i]);
  return sampled_json(nodes, v);
}

inline void to_json(json& j, const LuxemburgResult& r) {
  j = {{"norm", num(r.norm)},
       {"method", to_string(r.method)},
       {"bracket", {num(r.bracket_lo), num(r.bracket_hi)}},
       {"modular_at_norm", num(r.modular_at_norm)},
       {"iterations", r.iterations},
       {"tail_share", num(r.tail_share)},
       {"tail_warning", r.tail_warning}};
}

inline void to_json(json& j, const OperatorOutput& o) {
  j = sampled_json(o.nodes, o.values);
  j["errors"] = nums(o.errors);
}

inline void to_json(json& j, const CriterionReport& r) {
  j = {{"criterion", r.criterion},
       {"parameter", num(r.parameter)},
       {"value", num(r.value)},
       {"finite", r.finite},
       {"argsup_t", num(r.argsup_t)},
       {"sup_at_grid_edge", r.sup_at_grid_edge},
       {"lower_bound", num(r.lower_bound)},
       {"upper_bound", num(r.upper_bound)},
       {"tail_warning", r.tail_warning},
       {"tail_share", num(r.tail_share)},
       {"t_grid", nums(r.t_grid)},
       {"values", nums(r.values)},
       {"notes", r.notes}};
}

inline void to_json(json& j, const ConstantBounds& b) {
  j = {{"lower", num(b.lower)},
       {"upper", num(b.upper)},
       {"lower_parameter", num(b.lower_parameter)},
       {"upper_parameter", num(b.upper_parameter)},
       {"bounded", b.bounded},
       {"prefactor", num(b.prefactor)},
       {"range", {num(b.range_lo), num(b.range_hi)}},
       {"range_note", b.range_note},
       {"parameters", nums(b.parameters)},
       {"criterion_values", nums(b.criterion_values)},
       {"lower_terms", nums(b.lower_terms)},
       {"upper_terms", nums(b.upper_terms)},
       {"tail_warning", b.tail_warning},
       {"notes", b.notes}};
}

inline void to_json(json& j, const Corollary1Result& r) {
  j = {{"mode", r.mode == Balance::literal ? "literal" : "dimensional"},
       {"compatible", r.compatible},
       {"compatible_literal", r.compatible_literal},
       {"compatible_dimensional", r.compatible_dimensional},
       {"lower", num(r.lower)},
       {"upper", num(r.upper)},
       {"lower_argsup_s", num(r.lower_argsup_s)},
       {"sharp", r.sharp},
       {"sharp_constant", num(r.sharp_constant)},
       {"notes", r.notes}};
}

inline void to_json(json& j, const Corollary2Result& r) {
  j = {{"condition_holds", r.condition_holds}, {"criterion", r.report}};
}

inline void to_json(json& j, const GurkaState& s) {
  j = {{"iterations", s.iteration},
       {"converged", s.converged},
       {"residual", num(s.residual)},
       {"max_decrease_violation", num(s.max_decrease_violation)},
       {"max_change", nums(s.max_change)},
       {"w", sampled_json(s.nodes, s.values)}};
}

inline void to_json(json& j, const ResidualReport& r) {
  j = {{"residual", num(r.residual)}, {"worst_t", num(r.worst_t)}, {"nodes", nums(r.nodes)},
       {"L", nums(r.L)}, {"rhs", nums(r.rhs)}};
}

inline void to_json(json& j, const SolveReport& r) {
  j = {{"equation_residual", num(r.equation_residual)},
       {"outer_iterations", r.outer_iterations},
       {"outer_converged", r.outer_converged},
       {"outer_change", nums(r.outer_change)},
       {"inner", r.state},
       {"y0", sampled_json(r.y0, r.state.nodes)}};
}

inline void to_json(json& j, const KEstimate& k) {
  j = {{"value", num(k.value)},
       {"kind", "upper estimate"},
       {"best_member", k.best_member},
       {"member_sup", nums(k.member_sup)},
       {"warnings", k.warnings},
       {"anchor_unused", k.anchor_unused}};
}

inline void to_json(json& j, const Lemma1Report& r) {
  j = {{"holds", r.holds},   {"bound", num(r.bound)},         {"prefactor", num(r.prefactor)},
       {"lhs", nums(r.lhs)}, {"rhs", nums(r.rhs)},           {"ratio", nums(r.ratio)},
       {"y_residual", num(r.y_residual)}};
}

inline void to_json(json& j, const ConstantEstimate& e) {
  j = {{"kind", to_string(e.kind)},
       {"family", e.family},
       {"certification", "≥-certified"},
       {"empirical_sup", num(e.empirical_sup)},
       {"best_member", e.best_member},
       {"best_parameters", nums(e.best_parameters)},
       {"theoretical_lower", num(e.theoretical_lower)},
       {"theoretical_upper", num(e.theoretical_upper)},
       {"verdict", e.verdict()},
       {"details", e.details},
       {"unbounded_witness", e.unbounded_witness},
       {"lhs", nums(e.lhs)},
       {"rhs", nums(e.rhs)},
       {"ratios", nums(e.ratios)},
       {"notes", e.notes}};
}

inline void to_json(json& j, const MixedNormReport& r) {
  j = {{"grid", {r.nx, r.ny}},
       {"lhs", num(r.lhs)},
       {"rhs", num(r.rhs)},
       {"factor", num(r.factor)},
       {"ratio", num(r.ratio)},
       {"holds", r.holds},
       {"p_range", {num(r.p_lo), num(r.p_hi)}},
       {"q_range", {num(r.q_lo), num(r.q_hi)}}};
}

inline void to_json(json& j, const Theorem4Report& r) {
  j = {{"passed", r.passed()},
       {"lambda", num(r.lambda)},
       {"k_estimate", num(r.k_estimate)},
       {"lambda_above_k", r.lambda_above_k},
       {"solver_ok", r.solver_ok},
       {"solver_message", r.solver_message},
       {"equation_residual", num(r.equation_residual)},
       {"outer_iterations", r.outer_iterations},
       {"solution_direction", r.solution_direction},
       {"inequality_direction", r.inequality_direction},
       {"estimate", r.estimate ? json(*r.estimate) : json(nullptr)},
       {"notes", r.notes}};
}

}  // namespace varlp
