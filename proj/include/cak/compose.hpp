#pragma once

#include "cak/automaton.hpp"

#include <span>

namespace cak {

/// ⊗ over a nonempty list of components. The state set is the full cartesian
/// product; a component's lone move is emitted only when no other component
/// has a complementary move from the current joint state.
ContractAutomaton product(std::span<const ContractAutomaton> components);
ContractAutomaton product(const ContractAutomaton& a, const ContractAutomaton& b);

/// Π^i, with i zero-based. Alphabets are restricted to the occurring actions.
ContractAutomaton projection(const ContractAutomaton& a, std::size_t i);

/// ⊠: the product of all principals underlying the two operands.
ContractAutomaton a_product(const ContractAutomaton& a, const ContractAutomaton& b);
ContractAutomaton a_product(std::span<const ContractAutomaton> operands);

/// Concatenation of two principals; the left one must be acyclic.
ContractAutomaton concatenate(const ContractAutomaton& a, const ContractAutomaton& b);

/// Removes states unreachable from the initial state.
ContractAutomaton trim(const ContractAutomaton& a);
/// Keeps only states that are reachable and co-reachable (plus the initial state).
ContractAutomaton prune(const ContractAutomaton& a);

/// Subset construction for principals; states are named by their sorted members.
ContractAutomaton determinize(const ContractAutomaton& a);
bool is_deterministic(const ContractAutomaton& a);

}  // namespace cak
