#pragma once

#include "cak/automaton.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace cak {

/// w ∈ 𝔄: no lone request in the observable. Throws RankTooSmall on rank 1.
bool in_agreement(const Trace& w);

/// States from which no final state is reachable.
std::vector<std::size_t> hanged_states(const ContractAutomaton& a);

struct MpcResult {
    /// Non-hanged states of K1 with their transitions. When the initial state
    /// is hanged the controller is the bare initial state with no finals.
    ContractAutomaton controller;
    /// Hanged(K1), as state vectors of A.
    std::set<StateVector> hanged;
    /// Request transitions of A dropped when building K1.
    std::vector<Transition> removed_requests;
};

/// Most permissive controller: drop request transitions, then hanged states.
MpcResult mpc(const ContractAutomaton& a);

/// L(mpc(A)) = L(A).
bool is_safe(const ContractAutomaton& a);
/// L(mpc(A)) ≠ ∅.
bool admits_agreement(const ContractAutomaton& a);

struct LiabilityWitness {
    /// A run of both A and its controller reaching the offending state.
    Trace prefix;
    Transition offending;
    ActionVector step;
};

struct LiabilityReport {
    /// Zero-based principal indices.
    std::set<std::size_t> liable;
    std::map<std::size_t, LiabilityWitness> witnesses;
};

/// Principals taking part in a transition of A that leaves a
/// controller-reachable state, can still lead to acceptance in A, and is not a
/// transition of the controller.
LiabilityReport liable(const ContractAutomaton& a);

/// The alternative closed-form set of liable principals (only transitions
/// whose target is not a controller state); kept for comparison.
std::set<std::size_t> liable_by_state_exclusion(const ContractAutomaton& a);

/// A^o_1 ∩ A^o_2 ∩ co(A^r_1 ∪ A^r_2) ≠ ∅.
bool competitive(const ContractAutomaton& a, const ContractAutomaton& b);
/// (A^o_1 ∩ co(A^r_2)) ∪ (co(A^r_1) ∩ A^o_2) ≠ ∅.
bool collaborative(const ContractAutomaton& a, const ContractAutomaton& b);

}  // namespace cak

namespace cak {

/// A shortest accepted trace of the controller, if any (a trace in 𝔄 ∩ L(A)).
std::optional<Trace> agreement_witness(const ContractAutomaton& a);

}  // namespace cak
