#pragma once

#include "cak/automaton.hpp"
#include "cak/milp.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cak {

/// w ∈ 𝔚: every lone request can be paired injectively with a lone offer on
/// the same name, regardless of order. Throws RankTooSmall on rank 1.
bool in_weak_agreement(const Trace& w);

/// Reachable, co-reachable part of A with a single final state that differs
/// from the initial state and has no outgoing transitions. When needed a fresh
/// final state is added, entered from every old final state by an offer of
/// the reserved name fired by principal 1. Throws EmptyLanguage.
ContractAutomaton normalize(const ContractAutomaton& a);

/// True for the dummy transitions introduced by normalize().
bool is_dummy(const ActionVector& label) noexcept;

/// Request names indexing the balance constraints (reserved name excluded).
std::vector<std::string> balance_actions(const ContractAutomaton& normalized);
/// a^i_t: +1 for a lone offer of name i, -1 for a lone request, 0 otherwise.
std::vector<std::vector<int>> balance_coefficients(const ContractAutomaton& normalized,
                                                   const std::vector<std::string>& actions);

/// Default per-transition flow cap: |states| + 2·|requests|.
std::size_t default_flow_cap(const ContractAutomaton& normalized);

/// The complete F_{s,d} encoding for a normalized automaton.
struct FlowSystem {
    std::size_t source = 0, dest = 0;
    std::size_t cap = 0;
    MilpModel model;
    /// x_t per transition index.
    std::vector<std::size_t> x_vars;
    /// Connectivity flow z_t per non-loop transition index: the source ships
    /// one unit to every state q with p^q = 1, only along transitions with x_t > 0.
    std::map<std::size_t, std::size_t> z_vars;
    /// p^q per state; absent for the source.
    std::map<std::size_t, std::size_t> p_vars;
    std::vector<std::string> action_index;
    std::vector<std::vector<int>> coeffs;
};

FlowSystem build_flow_system(const ContractAutomaton& normalized, const StateVector& source,
                             const StateVector& dest, std::optional<std::size_t> cap = std::nullopt);
FlowSystem build_flow_system(const ContractAutomaton& normalized, std::size_t source, std::size_t dest,
                             std::optional<std::size_t> cap = std::nullopt);

/// Sums of x over backward minus forward star equal -1/+1/0 at source/dest/elsewhere.
bool is_flow(const ContractAutomaton& a, std::size_t source, std::size_t dest,
             const std::vector<std::size_t>& x);

/// A run from source to dest using every transition t exactly x[t] times;
/// built by a backward walk from dest, choosing transitions by ascending index.
/// Throws InfeasibleFlow when no such run exists.
std::vector<std::size_t> flow_to_run(const ContractAutomaton& a, std::size_t source, std::size_t dest,
                                     const std::vector<std::size_t>& x);
/// The trace of flow_to_run from the initial state to the (single) final state.
Trace flow_to_trace(const ContractAutomaton& a, const std::vector<std::size_t>& x);

struct WeakOptions {
    std::optional<std::size_t> cap;
    MilpOptions milp = default_milp_options();
    /// Add connectivity variables only for states found disconnected.
    bool lazy_connectivity = true;
    /// Upper limit on explored (state, balance) pairs in weakly_liable().
    std::size_t max_liability_nodes = 200000;
};

struct WeakVerdict {
    bool answer = true;
    /// Absent when the automaton has no requests.
    std::optional<Rational> gamma;
    /// For weak safety: the request name attaining the minimum.
    std::optional<std::string> action;
    /// The normalized automaton the flow refers to.
    std::optional<ContractAutomaton> normalized;
    /// Per transition of `normalized`.
    std::vector<std::size_t> witness_flow;
    /// An accepted trace of the input automaton inducing witness_flow.
    std::optional<Trace> witness_trace;
    std::size_t cap = 0;
};

/// min over request names of the least balance over F_{q0,qf}; weakly safe iff ≥ 0.
WeakVerdict is_weakly_safe(const ContractAutomaton& a, const WeakOptions& options = {});
/// max γ with every balance ≥ γ over F_{q0,qf}; admits weak agreement iff ≥ 0.
WeakVerdict admits_weak_agreement(const ContractAutomaton& a, const WeakOptions& options = {});

struct WeakLiabilityEntry {
    /// Transition of the input automaton.
    Transition transition;
    Rational gamma;
    /// A run prefix reaching the source of the transition.
    Trace prefix;
};

struct WeakLiabilityReport {
    /// Transitions with γ_t < 0.
    std::vector<WeakLiabilityEntry> flagged;
    /// Zero-based principal indices.
    std::set<std::size_t> liable;
    /// γ_t for every transition explored (keyed by transition of the input automaton).
    std::map<Transition, Rational> gamma;
    std::size_t cap = 0;
    std::size_t explored = 0;
};

/// Weakly liable principals: those taking part in a transition after which
/// no continuation can reach weak agreement although one could before.
WeakLiabilityReport weakly_liable(const ContractAutomaton& a, const WeakOptions& options = {});

/// Optimum of `model` where `x` are the flow variables of F_{s,d} on `a`
/// (balance rows already present). Connectivity constraints are added lazily
/// (or all at once) so the result is exact for F_{s,d}.
MilpOutcome solve_flow_model(MilpModel model, const ContractAutomaton& a, std::size_t source,
                             const std::vector<std::size_t>& x, std::size_t cap, const WeakOptions& options);

}  // namespace cak
