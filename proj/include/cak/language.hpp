#pragma once

#include "cak/automaton.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace cak {

/// True iff some run on w from the initial state ends in a final state.
bool accepts(const ContractAutomaton& a, const Trace& w);

/// All accepted traces of length ≤ max_len, each once. Traces are produced in
/// depth-first order, exploring successors in ascending label order.
std::vector<Trace> enumerate_traces(const ContractAutomaton& a, std::size_t max_len);

/// Accepted traces whose runs use every transition at most `visit_cap` times.
/// Each element is the trace together with the per-transition use counts of one
/// accepting run; runs with the same (trace, counts) are reported once.
struct CountedTrace {
    Trace trace;
    std::vector<std::size_t> counts;
    bool operator==(const CountedTrace&) const = default;
    auto operator<=>(const CountedTrace&) const = default;
};
std::vector<CountedTrace> enumerate_capped_runs(const ContractAutomaton& a, std::size_t visit_cap);

/// States reachable from the initial state by reading w.
std::vector<std::size_t> run_states(const ContractAutomaton& a, const Trace& w);

/// Reachable part renamed per coordinate in breadth-first order of first
/// appearance (successors visited in ascending label order). For
/// deterministic automata two automata are isomorphic iff their canonical forms
/// are equal.
ContractAutomaton canonical_form(const ContractAutomaton& a);

/// Isomorphism of the reachable parts, ignoring state names, declared
/// alphabets and principal names.
bool isomorphic(const ContractAutomaton& a, const ContractAutomaton& b);

}  // namespace cak
