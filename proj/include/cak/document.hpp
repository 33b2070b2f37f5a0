#pragma once

#include "cak/automaton.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace cak {

/// JSON form of an automaton:
///   { "rank", "states"?, "initial", "finals", "transitions": [{from, label, to}],
///     "requests"?, "offers"?, "principal_names"? }
/// States are arrays of strings (a bare string is accepted for rank 1); labels
/// are arrays of "?a" / "!a" / "-" (a bare string is accepted for rank 1).
/// When "states" is omitted it is collected from the other fields.
ContractAutomaton automaton_from_json(const nlohmann::json& doc);
nlohmann::ordered_json automaton_to_json(const ContractAutomaton& a);

ContractAutomaton load_automaton(const std::string& path);
void save_automaton(const ContractAutomaton& a, const std::string& path);

/// A file holding either a JSON document or a principal expression.
ContractAutomaton load_automaton_or_expression(const std::string& path);

/// Graphviz description.
std::string render_dot(const ContractAutomaton& a);

nlohmann::ordered_json trace_to_json(const Trace& w);

}  // namespace cak
