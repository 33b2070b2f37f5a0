#pragma once

#include "cak/automaton.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cak {

// ------------------------------------------------------------------ H-PCL

enum class PclKind { Conj, Impl, CImpl };

/// Conj: the atoms. Impl / CImpl: premises → (or ↠) conclusion.
struct PclClause {
    PclKind kind = PclKind::Conj;
    std::vector<std::string> atoms;
    std::string conclusion;
    bool operator==(const PclClause&) const = default;
};

struct PclFormula {
    std::vector<PclClause> clauses;
    bool operator==(const PclFormula&) const = default;
};

/// Throws InvalidFormula when the Horn restrictions are violated.
void validate(const PclFormula& p);
/// λ(p): every atom of p, sorted and unique.
std::vector<std::string> lambda(const PclFormula& p);

ContractAutomaton translate_pcl_clause(const PclClause& c);
/// ⊠ of the clause automata; the result is checked to be deterministic.
ContractAutomaton translate_pcl(const PclFormula& p);

/// The residual formula p / a for an offer or match leaving the initial state.
PclFormula pcl_residual(const PclFormula& p, const ActionVector& a);

struct Entailment {
    bool holds = false;
    std::optional<Trace> witness;
};

/// p ⊢ λ(p) iff ⟦p⟧ admits agreement.
Entailment pcl_entails_lambda(const PclFormula& p);
/// For formulae without standard implications: p ⊢ λ(p) iff ⟦p⟧ admits weak agreement.
Entailment pcl_weak_entails(const PclFormula& p);

// ------------------------------------------------------------- H-ILL^mix

struct IllLiteral {
    std::string atom;
    bool negative = false;
    bool operator==(const IllLiteral&) const = default;
};

enum class IllKind { Tensor, HornImpl };

/// Tensor: the literals in `conclusions`. HornImpl: premises ⊸ conclusions.
struct IllClause {
    IllKind kind = IllKind::Tensor;
    std::vector<std::string> premises;
    std::vector<IllLiteral> conclusions;
    bool operator==(const IllClause&) const = default;
};

/// A tensor of at least two clauses.
struct IllFormula {
    std::vector<IllClause> clauses;
    bool operator==(const IllFormula&) const = default;
};

using IllElement = std::variant<IllClause, IllFormula>;
/// A multiset of formulae and clauses.
using IllContext = std::vector<IllElement>;

void validate(const IllClause& c);
void validate(const IllFormula& p);

/// Subset-lattice automaton for a tensor of literals (requests for negative
/// literals, offers for positive ones); repeated literals fire separately.
ContractAutomaton translate_ill_tensor(const std::vector<IllLiteral>& literals);
/// Deterministic principal for one clause.
ContractAutomaton translate_ill_clause(const IllClause& c);
/// ⊠ over every clause of every element.
ContractAutomaton translate_ill(const IllContext& gamma);

/// Γ ⊢ Z honoured iff some accepted trace of ⟦Γ⟧ has only matches and offers
/// whose names form exactly the multiset of Z.
Entailment ill_honoured(const IllContext& gamma, const std::vector<IllLiteral>& z);

}  // namespace cak
