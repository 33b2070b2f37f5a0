#pragma once

#include "cak/agreement.hpp"
#include "cak/compose.hpp"
#include "cak/document.hpp"
#include "cak/dsl.hpp"
#include "cak/language.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace cak_test {

using namespace cak;

inline ContractAutomaton fixture(const std::string& name)
{
    return load_automaton_or_expression(std::string(CAK_FIXTURE_DIR) + "/" + name);
}

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5)
{
    return std::bernoulli_distribution(p)(rng);
}

/// A random principal over `names`; each name is given a single role so the
/// principal never both offers and requests it.
inline ContractAutomaton random_principal(Rng& rng, std::size_t max_states, const std::vector<std::string>& names,
                                          std::size_t max_out = 2, const std::string& tag = "p")
{
    auto n = pick(rng, 1, max_states);
    std::vector<bool> offer(names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
        offer[i] = coin(rng);
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < n; ++i)
        states.push_back({tag + std::to_string(i)});
    std::vector<Transition> ts;
    for (std::size_t q = 0; q < n; ++q) {
        auto k = pick(rng, q + 1 < n ? 1 : 0, max_out);
        for (std::size_t j = 0; j < k; ++j) {
            auto a = pick(rng, 0, names.size() - 1);
            auto b = offer[a] ? BasicAction::offer(names[a]) : BasicAction::request(names[a]);
            ts.push_back({q, ActionVector({b}), pick(rng, 0, n - 1)});
        }
    }
    std::vector<std::size_t> finals;
    for (std::size_t q = 0; q < n; ++q)
        if (coin(rng, 0.35))
            finals.push_back(q);
    if (finals.empty())
        finals.push_back(pick(rng, 0, n - 1));
    return ContractAutomaton(1, states, 0, finals, ts);
}

/// A random acyclic principal (transitions only go to higher-numbered states).
inline ContractAutomaton random_acyclic_principal(Rng& rng, std::size_t max_states,
                                                  const std::vector<std::string>& names, const std::string& tag)
{
    auto n = pick(rng, 1, max_states);
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < n; ++i)
        states.push_back({tag + std::to_string(i)});
    std::vector<Transition> ts;
    for (std::size_t q = 0; q + 1 < n; ++q) {
        auto k = pick(rng, 1, 2);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& name = names[pick(rng, 0, names.size() - 1)];
            // Offers only: no name can end up both offered and requested.
            ts.push_back({q, ActionVector({BasicAction::offer(name)}), pick(rng, q + 1, n - 1)});
        }
    }
    std::vector<std::size_t> finals{n - 1};
    if (n > 1 && coin(rng, 0.3))
        finals.push_back(pick(rng, 0, n - 2));
    return ContractAutomaton(1, states, 0, finals, ts);
}

/// Reachable and co-reachable part with alphabets reduced to the occurring actions.
inline ContractAutomaton useful_part(const ContractAutomaton& a)
{
    auto keep = reachable_states(a);
    auto co = coreachable_states(a);
    for (std::size_t i = 0; i < keep.size(); ++i)
        keep[i] = keep[i] && co[i];
    return restrict_states(a, keep, true);
}

using LabelText = std::vector<std::string>;
using EdgeText = std::tuple<StateVector, LabelText, StateVector>;

inline LabelText label_text(const ActionVector& a)
{
    LabelText r;
    for (const auto& e : a.entries())
        r.push_back(e.to_string());
    return r;
}

inline std::set<EdgeText> edge_set(const ContractAutomaton& a)
{
    std::set<EdgeText> r;
    for (const auto& t : a.transitions())
        r.insert({a.state(t.source), label_text(t.label), a.state(t.target)});
    return r;
}

/// ⊗ written out directly from its two clauses, over state vectors and label
/// strings, independently of the library's indexing.
inline std::set<EdgeText> oracle_product_edges(const std::vector<ContractAutomaton>& comps)
{
    std::vector<std::size_t> offset{0};
    std::size_t rank = 0;
    for (const auto& c : comps) {
        rank += c.rank();
        offset.push_back(rank);
    }
    auto lone = [](const LabelText& l, std::string& kind, std::string& name) {
        int active = 0;
        for (const auto& e : l)
            if (e != "-") {
                ++active;
                kind = e.substr(0, 1);
                name = e.substr(1);
            }
        return active == 1;
    };
    auto complementary_labels = [&](const LabelText& x, const LabelText& y) {
        std::string kx, nx, ky, ny;
        return lone(x, kx, nx) && lone(y, ky, ny) && nx == ny && kx != ky;
    };
    std::set<EdgeText> out;
    std::vector<std::size_t> idx(comps.size(), 0);
    while (true) {
        StateVector joint;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& s = comps[i].state(idx[i]);
            joint.insert(joint.end(), s.begin(), s.end());
        }
        auto place = [&](std::size_t i, const Transition& t, StateVector& target, LabelText& label) {
            auto l = label_text(t.label);
            std::copy(l.begin(), l.end(), label.begin() + static_cast<long>(offset[i]));
            const auto& d = comps[i].state(t.target);
            std::copy(d.begin(), d.end(), target.begin() + static_cast<long>(offset[i]));
        };
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (const auto& ti : comps[i].outgoing(idx[i])) {
                auto li = label_text(ti.label);
                bool blocked = false;
                for (std::size_t j = 0; j < comps.size(); ++j) {
                    if (j == i)
                        continue;
                    for (const auto& tj : comps[j].outgoing(idx[j])) {
                        if (!complementary_labels(li, label_text(tj.label)))
                            continue;
                        blocked = true;
                        if (i < j) {
                            StateVector target = joint;
                            LabelText label(rank, "-");
                            place(i, ti, target, label);
                            place(j, tj, target, label);
                            out.insert({joint, label, target});
                        }
                    }
                }
                if (!blocked) {
                    StateVector target = joint;
                    LabelText label(rank, "-");
                    place(i, ti, target, label);
                    out.insert({joint, label, target});
                }
            }
        }
        std::size_t k = 0;
        while (k < comps.size() && ++idx[k] == comps[k].num_states())
            idx[k++] = 0;
        if (k == comps.size())
            break;
    }
    return out;
}

/// Plain subset simulation.
inline bool oracle_accepts(const ContractAutomaton& a, const Trace& w)
{
    std::set<std::size_t> cur{a.initial()};
    for (const auto& l : w) {
        std::set<std::size_t> next;
        for (auto q : cur)
            for (const auto& t : a.transitions())
                if (t.source == q && t.label == l)
                    next.insert(t.target);
        cur = std::move(next);
    }
    return std::any_of(cur.begin(), cur.end(), [&](std::size_t q) { return a.is_final(q); });
}

inline std::vector<ActionVector> distinct_labels(const ContractAutomaton& a)
{
    std::set<ActionVector> s;
    for (const auto& t : a.transitions())
        s.insert(t.label);
    return {s.begin(), s.end()};
}

/// Every word over the labels of `a` up to length `max_len`.
inline void for_each_word(const std::vector<ActionVector>& labels, std::size_t max_len,
                          const std::function<void(const Trace&)>& f)
{
    Trace w;
    std::function<void()> rec = [&]() {
        f(w);
        if (w.size() == max_len)
            return;
        for (const auto& l : labels) {
            w.push_back(l);
            rec();
            w.pop_back();
        }
    };
    rec();
}

inline bool oracle_in_agreement(const Trace& w)
{
    return std::none_of(w.begin(), w.end(), [](const ActionVector& a) { return a.is_request(); });
}

/// Weak agreement by explicit bipartite matching of lone requests to lone
/// offers of the same name (augmenting paths).
inline bool oracle_in_weak_agreement(const Trace& w)
{
    std::vector<std::size_t> requests, offers;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k].is_request())
            requests.push_back(k);
        else if (w[k].is_offer())
            offers.push_back(k);
    }
    std::vector<long> owner(offers.size(), -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t r, std::vector<bool>& seen) {
        for (std::size_t o = 0; o < offers.size(); ++o) {
            if (seen[o] || w[offers[o]].name() != w[requests[r]].name())
                continue;
            seen[o] = true;
            if (owner[o] < 0 || augment(static_cast<std::size_t>(owner[o]), seen)) {
                owner[o] = static_cast<long>(r);
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = 0; r < requests.size(); ++r) {
        std::vector<bool> seen(offers.size());
        if (!augment(r, seen))
            return false;
    }
    return true;
}

inline std::set<std::string> trace_strings(const std::vector<Trace>& ws)
{
    std::set<std::string> r;
    for (const auto& w : ws)
        r.insert(to_string(w));
    return r;
}

/// The same automaton started at another state.
inline ContractAutomaton restarted(const ContractAutomaton& a, std::size_t initial)
{
    return ContractAutomaton(a.rank(), a.states(), initial, a.finals(), a.transitions(), a.alphabet(),
                             a.principal_names());
}

inline Trace parse_trace(const std::vector<std::vector<std::string>>& labels)
{
    Trace w;
    for (const auto& l : labels) {
        std::vector<BasicAction> e;
        for (const auto& s : l)
            e.push_back(BasicAction::parse(s));
        w.emplace_back(std::move(e));
    }
    return w;
}

}  // namespace cak_test
