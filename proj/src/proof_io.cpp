#include "ptsem/proof_io.hpp"

#include <json.hpp>
#include <sstream>

namespace ptsem {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json node_to_json(const Argument& a) {
  ordered_json j;
  j["rule"] = rule_name(a.rule());
  j["conclusion"] = print_formula(a.conclusion());
  if (a.label()) j["label"] = *a.label();
  if (a.base_rule()) j["base_rule"] = print_rule(*a.base_rule());
  if (a.has_discharges()) {
    ordered_json ds = ordered_json::array();
    for (std::size_t i = 0; i < a.premises().size(); ++i) ds.push_back(a.discharges(i));
    j["discharges"] = ds;
  }
  if (!a.is_leaf()) {
    ordered_json ps = ordered_json::array();
    for (const auto& p : a.premises()) ps.push_back(node_to_json(p));
    j["premises"] = ps;
  }
  return j;
}

const ordered_json& field(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ProofFormatError(where + ": missing field '" + key + "'");
  return *it;
}

std::string as_string(const ordered_json& j, const std::string& where) {
  if (!j.is_string()) throw ProofFormatError(where + ": expected a string");
  return j.get<std::string>();
}

Argument node_from_json(const ordered_json& j, const Path& path) {
  const std::string where = "node " + print_path(path);
  if (!j.is_object()) throw ProofFormatError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "rule" && k != "conclusion" && k != "label" && k != "base_rule" && k != "discharges" &&
        k != "premises")
      throw ProofFormatError(where + ": unknown field '" + k + "'");
  }
  RuleId rule;
  try {
    rule = rule_from_name(as_string(field(j, "rule", where), where));
  } catch (const std::invalid_argument& e) {
    throw ProofFormatError(where + ": " + e.what());
  }
  const Formula conclusion = [&] {
    try {
      return parse_formula(as_string(field(j, "conclusion", where), where));
    } catch (const ParseError& e) {
      throw ProofFormatError(where + ": " + e.what());
    }
  }();
  if (rule == RuleId::Assume) {
    if (j.contains("premises") || j.contains("discharges") || j.contains("base_rule"))
      throw ProofFormatError(where + ": Assume leaves take only a label");
    std::optional<Label> label;
    if (j.contains("label")) label = as_string(j["label"], where);
    return Argument::assume(conclusion, label);
  }
  if (j.contains("label")) throw ProofFormatError(where + ": only Assume leaves carry a label");
  std::vector<Argument> premises;
  const auto& ps = field(j, "premises", where);
  if (!ps.is_array()) throw ProofFormatError(where + ": premises must be a list");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Path sub = path;
    sub.push_back(i);
    premises.push_back(node_from_json(ps[i], sub));
  }
  std::vector<std::vector<Label>> discharges;
  if (j.contains("discharges")) {
    const auto& ds = j["discharges"];
    if (!ds.is_array() || ds.size() != premises.size())
      throw ProofFormatError(where + ": discharges must list one label set per premise");
    for (const auto& d : ds) {
      if (!d.is_array()) throw ProofFormatError(where + ": discharge entry must be a list");
      std::vector<Label> ls;
      for (const auto& l : d) ls.push_back(as_string(l, where));
      discharges.push_back(std::move(ls));
    }
  }
  std::optional<AtomicRule> base_rule;
  if (j.contains("base_rule")) {
    try {
      base_rule = parse_rule(as_string(j["base_rule"], where));
    } catch (const std::exception& e) {
      throw ProofFormatError(where + ": " + e.what());
    }
  }
  if ((rule == RuleId::BaseRule) != base_rule.has_value())
    throw ProofFormatError(where + ": base_rule is required exactly on BaseRule nodes");
  return Argument::make(rule, conclusion, std::move(premises), std::move(discharges), std::move(base_rule));
}

void dot_node(const Argument& a, std::ostringstream& out, int& next) {
  int id = next++;
  std::string text = print_formula(a.conclusion());
  if (a.label()) text = "[" + text + "]^" + *a.label();
  out << "  n" << id << " [label=\"" << text << "\\n" << rule_name(a.rule()) << "\"];\n";
  for (const auto& p : a.premises()) {
    int child = next;
    dot_node(p, out, next);
    out << "  n" << id << " -> n" << child << ";\n";
  }
}

void text_node(const Argument& a, std::ostringstream& out, int depth) {
  out << std::string(2 * depth, ' ') << print_formula(a.conclusion()) << "  [" << rule_name(a.rule());
  if (a.label()) out << " " << *a.label();
  if (a.base_rule()) out << " " << print_rule(*a.base_rule());
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    const auto& ds = a.discharges(i);
    if (ds.empty()) continue;
    out << " /" << i << ":";
    for (const auto& l : ds) out << " " << l;
  }
  out << "]\n";
  for (const auto& p : a.premises()) text_node(p, out, depth + 1);
}

}  // namespace

std::string write_proof(const Argument& a) { return node_to_json(a).dump(2) + "\n"; }

Argument read_proof(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProofFormatError(std::string("not a JSON document: ") + e.what());
  }
  return node_from_json(j, {});
}

std::string proof_to_dot(const Argument& a) {
  std::ostringstream out;
  out << "digraph proof {\n  rankdir=BT;\n  node [shape=plaintext];\n";
  int next = 0;
  dot_node(a, out, next);
  out << "}\n";
  return out.str();
}

std::string proof_to_text(const Argument& a) {
  std::ostringstream out;
  text_node(a, out, 0);
  return out.str();
}

}  // namespace ptsem
