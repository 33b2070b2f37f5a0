#pragma once

#include "cak/action.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace cak {

/// Per-principal state identifiers, one per coordinate.
using StateVector = std::vector<std::string>;

std::string to_string(const StateVector& q);

/// A transition between state indices of its automaton.
struct Transition {
    std::size_t source = 0;
    ActionVector label;
    std::size_t target = 0;

    auto operator<=>(const Transition&) const = default;
    bool operator==(const Transition&) const = default;
};

/// Request and offer name sets (A^r, A^o).
struct Alphabet {
    std::set<std::string> requests;
    std::set<std::string> offers;
    bool operator==(const Alphabet&) const = default;
};

/// Rank-n contract automaton. Immutable after construction.
///
/// States are kept in the order given; transitions are sorted by
/// (source, label, target) and deduplicated, so transition indices are
/// stable and reproducible.
class ContractAutomaton {
public:
    /// Builds and validates. When `alphabet` is empty it is derived from the
    /// transitions; otherwise it must contain every name used by a label.
    ContractAutomaton(std::size_t rank, std::vector<StateVector> states, std::size_t initial,
                      std::vector<std::size_t> finals, std::vector<Transition> transitions,
                      std::optional<Alphabet> alphabet = std::nullopt,
                      std::vector<std::string> principal_names = {});

    std::size_t rank() const noexcept { return rank_; }
    std::size_t num_states() const noexcept { return states_.size(); }
    const std::vector<StateVector>& states() const noexcept { return states_; }
    const StateVector& state(std::size_t i) const { return states_.at(i); }
    std::optional<std::size_t> find_state(const StateVector& q) const;
    std::size_t initial() const noexcept { return initial_; }
    /// Sorted, unique.
    const std::vector<std::size_t>& finals() const noexcept { return finals_; }
    bool is_final(std::size_t i) const noexcept { return final_mask_[i]; }

    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    /// Outgoing transitions of state i, as a contiguous range of transitions().
    std::span<const Transition> outgoing(std::size_t i) const;
    /// Index in transitions() of the first outgoing transition of state i.
    std::size_t outgoing_offset(std::size_t i) const { return offsets_.at(i); }
    std::optional<std::size_t> find_transition(const Transition& t) const;

    const std::set<std::string>& requests() const noexcept { return alphabet_.requests; }
    const std::set<std::string>& offers() const noexcept { return alphabet_.offers; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    /// Display names of principals; defaults to "1".."n".
    const std::vector<std::string>& principal_names() const noexcept { return principal_names_; }

    bool is_principal() const noexcept { return rank_ == 1; }
    bool has_cycle() const;

    bool operator==(const ContractAutomaton&) const = default;

private:
    std::size_t rank_;
    std::vector<StateVector> states_;
    std::map<StateVector, std::size_t> index_;
    std::size_t initial_;
    std::vector<std::size_t> finals_;
    std::vector<bool> final_mask_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_;
    Alphabet alphabet_;
    std::vector<std::string> principal_names_;
};

/// Alphabet of names actually occurring in the transition labels.
Alphabet used_alphabet(const std::vector<Transition>& transitions);

/// States reachable from the initial state (mask).
std::vector<bool> reachable_states(const ContractAutomaton& a);
/// States from which some final state is reachable (mask).
std::vector<bool> coreachable_states(const ContractAutomaton& a);

/// Restricts A to the kept states; the initial state is always kept.
/// Alphabets are preserved unless `restrict_alphabet` is set.
ContractAutomaton restrict_states(const ContractAutomaton& a, const std::vector<bool>& keep,
                                  bool restrict_alphabet = false);

}  // namespace cak
