#include "cak/logic.hpp"

#include "cak/agreement.hpp"
#include "cak/compose.hpp"
#include "cak/error.hpp"
#include "cak/weak.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace cak {

namespace {

void invalid(const std::string& m)
{
    throw Error(ErrorKind::InvalidFormula, m);
}

void check_atom(const std::string& a)
{
    if (!is_valid_action_name(a) || a == done_action)
        invalid("invalid atom '" + a + "'");
}

std::string subset_name(const std::vector<std::size_t>& members)
{
    std::string s = "{";
    for (auto m : members)
        s += std::to_string(m + 1) + ",";
    return s + "*}";
}

/// Subsets of {0..n-1} in a fixed order, as sorted index lists.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n)
{
    std::vector<std::vector<std::size_t>> r;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::size_t{1} << k))
                s.push_back(k);
        r.push_back(std::move(s));
    }
    return r;
}

/// Lattice automaton: state per subset of pending items; firing item k removes it.
/// Optional self-loops with `loop` at the given states.
ContractAutomaton lattice(const std::vector<BasicAction>& items, const std::optional<BasicAction>& loop,
                          bool loop_everywhere)
{
    if (items.size() > 16)
        invalid("too many literals in one clause");
    auto subsets = all_subsets(items.size());
    std::vector<StateVector> states;
    for (const auto& s : subsets)
        states.push_back({subset_name(s)});
    const std::size_t full = subsets.size() - 1;
    std::vector<Transition> ts;
    for (std::size_t mask = 0; mask < subsets.size(); ++mask) {
        for (std::size_t k = 0; k < items.size(); ++k)
            if (mask & (std::size_t{1} << k))
                ts.push_back({mask, ActionVector({items[k]}), mask & ~(std::size_t{1} << k)});
        if (loop && (loop_everywhere || mask == 0))
            ts.push_back({mask, ActionVector({*loop}), mask});
    }
    return ContractAutomaton(1, std::move(states), full, {0}, std::move(ts));
}

}  // namespace

// ------------------------------------------------------------------ H-PCL

void validate(const PclFormula& p)
{
    if (p.clauses.size() < 2)
        invalid("a formula needs at least two clauses");
    for (const auto& c : p.clauses) {
        if (c.atoms.empty())
            invalid("a clause needs at least one atom or premise");
        std::set<std::string> seen;
        for (const auto& a : c.atoms) {
            check_atom(a);
            if (!seen.insert(a).second)
                invalid("atom '" + a + "' repeated within a clause");
        }
        if (c.kind != PclKind::Conj) {
            check_atom(c.conclusion);
            if (seen.count(c.conclusion))
                invalid("conclusion '" + c.conclusion + "' is also a premise");
        }
    }
}

std::vector<std::string> lambda(const PclFormula& p)
{
    std::set<std::string> atoms;
    for (const auto& c : p.clauses) {
        atoms.insert(c.atoms.begin(), c.atoms.end());
        if (c.kind != PclKind::Conj)
            atoms.insert(c.conclusion);
    }
    return {atoms.begin(), atoms.end()};
}

ContractAutomaton translate_pcl_clause(const PclClause& c)
{
    if (c.kind == PclKind::Conj) {
        std::vector<Transition> ts;
        for (const auto& a : c.atoms)
            ts.push_back({0, ActionVector({BasicAction::offer(a)}), 0});
        return ContractAutomaton(1, {{"{*}"}}, 0, {0}, std::move(ts));
    }
    std::vector<BasicAction> premises;
    for (const auto& a : c.atoms)
        premises.push_back(BasicAction::request(a));
    return lattice(premises, BasicAction::offer(c.conclusion), c.kind == PclKind::CImpl);
}

ContractAutomaton translate_pcl(const PclFormula& p)
{
    validate(p);
    std::vector<ContractAutomaton> parts;
    for (const auto& c : p.clauses)
        parts.push_back(translate_pcl_clause(c));
    auto r = a_product(parts);
    if (!is_deterministic(r))
        throw std::logic_error("PCL translation produced a nondeterministic automaton");
    return r;
}

PclFormula pcl_residual(const PclFormula& p, const ActionVector& a)
{
    if (!a.is_match())
        return p;
    PclFormula r = p;
    for (auto i : a.active()) {
        if (!a[i].is_request())
            continue;
        auto& c = r.clauses.at(i);
        auto it = std::find(c.atoms.begin(), c.atoms.end(), a[i].name);
        if (c.kind == PclKind::Conj || it == c.atoms.end())
            invalid("match is not a premise of clause " + std::to_string(i + 1));
        c.atoms.erase(it);
        if (c.atoms.empty()) {
            c.kind = PclKind::Conj;
            c.atoms = {c.conclusion};
            c.conclusion.clear();
        }
    }
    return r;
}

Entailment pcl_entails_lambda(const PclFormula& p)
{
    auto a = translate_pcl(p);
    auto w = agreement_witness(a);
    return {w.has_value(), w};
}

Entailment pcl_weak_entails(const PclFormula& p)
{
    validate(p);
    for (const auto& c : p.clauses)
        if (c.kind == PclKind::Impl)
            throw Error(ErrorKind::StandardImplicationPresent,
                        "weak entailment is decided only for formulae without standard implications");
    auto v = admits_weak_agreement(translate_pcl(p));
    return {v.answer, v.answer ? v.witness_trace : std::nullopt};
}

// ------------------------------------------------------------- H-ILL^mix

void validate(const IllClause& c)
{
    if (c.conclusions.empty())
        invalid("a clause needs at least one literal");
    std::set<std::pair<std::string, bool>> lits;
    for (const auto& l : c.conclusions) {
        check_atom(l.atom);
        lits.insert({l.atom, l.negative});
    }
    for (const auto& l : c.conclusions)
        if (!l.negative && lits.count({l.atom, true}))
            invalid("literal '" + l.atom + "' occurs with its negation");
    if (c.kind == IllKind::HornImpl) {
        if (c.premises.empty())
            invalid("an implication needs at least one premise");
        for (const auto& b : c.premises) {
            check_atom(b);
            if (lits.count({b, false}))
                invalid("premise '" + b + "' also occurs positively in the conclusion");
        }
    } else if (!c.premises.empty()) {
        invalid("a tensor clause has no premises");
    }
}

void validate(const IllFormula& p)
{
    if (p.clauses.size() < 2)
        invalid("a formula needs at least two clauses");
    for (const auto& c : p.clauses)
        validate(c);
}

ContractAutomaton translate_ill_tensor(const std::vector<IllLiteral>& literals)
{
    std::vector<BasicAction> items;
    for (const auto& l : literals)
        items.push_back(l.negative ? BasicAction::request(l.atom) : BasicAction::offer(l.atom));
    return lattice(items, std::nullopt, false);
}

ContractAutomaton translate_ill_clause(const IllClause& c)
{
    validate(c);
    if (c.kind == IllKind::Tensor)
        return determinize(translate_ill_tensor(c.conclusions));
    std::vector<IllLiteral> debts;
    for (const auto& b : c.premises)
        debts.push_back({b, true});
    return determinize(concatenate(translate_ill_tensor(debts), translate_ill_tensor(c.conclusions)));
}

ContractAutomaton translate_ill(const IllContext& gamma)
{
    if (gamma.empty())
        invalid("empty multiset of formulae");
    std::vector<ContractAutomaton> parts;
    for (const auto& e : gamma) {
        if (const auto* c = std::get_if<IllClause>(&e)) {
            parts.push_back(translate_ill_clause(*c));
        } else {
            const auto& p = std::get<IllFormula>(e);
            validate(p);
            for (const auto& c2 : p.clauses)
                parts.push_back(translate_ill_clause(c2));
        }
    }
    return product(parts);
}

Entailment ill_honoured(const IllContext& gamma, const std::vector<IllLiteral>& z)
{
    std::map<std::string, std::size_t> want;
    for (const auto& l : z) {
        if (l.negative)
            throw Error(ErrorKind::NegativeAtomInZ, "Z must be a positive tensor product");
        check_atom(l.atom);
        ++want[l.atom];
    }
    auto a = translate_ill(gamma);
    std::set<std::pair<std::size_t, std::map<std::string, std::size_t>>> failed;
    Trace cur;
    std::function<bool(std::size_t)> go = [&](std::size_t q) -> bool {
        bool done = a.is_final(q) && std::all_of(want.begin(), want.end(), [](const auto& kv) { return kv.second == 0; });
        if (done)
            return true;
        if (failed.count({q, want}))
            return false;
        for (const auto& t : a.outgoing(q)) {
            if (t.label.is_request())
                continue;
            std::size_t* slot = nullptr;
            if (t.label.is_offer()) {
                auto it = want.find(t.label.name());
                if (it == want.end() || it->second == 0)
                    continue;
                slot = &it->second;
                --*slot;
            }
            cur.push_back(t.label);
            bool ok = go(t.target);
            if (slot)
                ++*slot;
            if (ok)
                return true;
            cur.pop_back();
        }
        failed.insert({q, want});
        return false;
    };
    if (go(a.initial()))
        return {true, cur};
    return {false, std::nullopt};
}

}  // namespace cak
