#pragma once

#include "cak/automaton.hpp"
#include "cak/logic.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cak {

/// Regular-expression notation for principals:
///   expr := term ('+' term)* ; term := factor ('.' factor)* ;
///   factor := primary '*'* ; primary := ('?'|'!') name | '(' expr ')'
struct PrincipalExpr {
    enum class Kind { Atom, Concat, Choice, Star };
    Kind kind = Kind::Atom;
    BasicAction action;
    std::vector<PrincipalExpr> children;
    bool operator==(const PrincipalExpr&) const = default;
};

/// Throws SyntaxError with the offending character position.
PrincipalExpr parse_principal_expr(std::string_view text);
/// Minimal parenthesization; parse_principal_expr(print(e)) == e.
std::string print(const PrincipalExpr& e);
/// Thompson construction, ε-elimination and trimming. Throws
/// SelfComplementaryPrincipal when the principal would both offer and request a name.
ContractAutomaton compile_principal(const PrincipalExpr& e, const std::string& principal_name = {});
ContractAutomaton parse_principal(std::string_view text, const std::string& principal_name = {});

/// `a & b -> c /\ a -->> c /\ d & e`, clauses optionally parenthesized.
PclFormula parse_pcl(std::string_view text);
/// Comma-separated multiset; an element is a clause (`a * b~`, `a * b -o c * d~`)
/// or a formula made of parenthesized clauses joined by `*`.
IllContext parse_ill_context(std::string_view text);
/// Tensor of literals, possibly empty.
std::vector<IllLiteral> parse_ill_literals(std::string_view text);

std::string print(const PclFormula& p);
std::string print(const IllContext& gamma);

}  // namespace cak
