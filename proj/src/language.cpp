#include "cak/language.hpp"

#include "cak/compose.hpp"
#include "cak/error.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace cak {

namespace {

void check_rank(const ContractAutomaton& a, const Trace& w)
{
    auto r = trace_rank(w);
    if (r && *r != a.rank())
        throw Error(ErrorKind::RankMismatch, "trace rank " + std::to_string(*r) +
                                                 " differs from automaton rank " +
                                                 std::to_string(a.rank()));
}

}  // namespace

std::vector<std::size_t> run_states(const ContractAutomaton& a, const Trace& w)
{
    check_rank(a, w);
    std::set<std::size_t> cur{a.initial()};
    for (const auto& act : w) {
        std::set<std::size_t> next;
        for (auto q : cur)
            for (const auto& t : a.outgoing(q))
                if (t.label == act)
                    next.insert(t.target);
        cur.swap(next);
        if (cur.empty())
            break;
    }
    return {cur.begin(), cur.end()};
}

bool accepts(const ContractAutomaton& a, const Trace& w)
{
    auto end = run_states(a, w);
    return std::any_of(end.begin(), end.end(), [&](std::size_t q) { return a.is_final(q); });
}

std::vector<Trace> enumerate_traces(const ContractAutomaton& a, std::size_t max_len)
{
    std::vector<Trace> out;
    Trace cur;
    std::function<void(const std::vector<std::size_t>&)> go = [&](const std::vector<std::size_t>& s) {
        if (std::any_of(s.begin(), s.end(), [&](std::size_t q) { return a.is_final(q); }))
            out.push_back(cur);
        if (cur.size() == max_len)
            return;
        std::map<ActionVector, std::set<std::size_t>> succ;
        for (auto q : s)
            for (const auto& t : a.outgoing(q))
                succ[t.label].insert(t.target);
        for (const auto& [label, targets] : succ) {
            cur.push_back(label);
            go(std::vector<std::size_t>(targets.begin(), targets.end()));
            cur.pop_back();
        }
    };
    go({a.initial()});
    return out;
}

std::vector<CountedTrace> enumerate_capped_runs(const ContractAutomaton& a, std::size_t visit_cap)
{
    const auto& ts = a.transitions();
    std::set<CountedTrace> found;
    std::set<std::pair<std::size_t, std::vector<std::size_t>>> visited;
    CountedTrace cur{{}, std::vector<std::size_t>(ts.size(), 0)};
    std::function<void(std::size_t)> go = [&](std::size_t q) {
        if (!visited.insert({q, cur.counts}).second)
            return;
        if (a.is_final(q))
            found.insert(cur);
        for (std::size_t k = a.outgoing_offset(q); k < a.outgoing_offset(q) + a.outgoing(q).size(); ++k) {
            if (cur.counts[k] >= visit_cap)
                continue;
            ++cur.counts[k];
            cur.trace.push_back(ts[k].label);
            go(ts[k].target);
            cur.trace.pop_back();
            --cur.counts[k];
        }
    };
    go(a.initial());
    return {found.begin(), found.end()};
}

ContractAutomaton canonical_form(const ContractAutomaton& a)
{
    std::vector<std::size_t> order;
    std::vector<bool> seen(a.num_states(), false);
    std::deque<std::size_t> work{a.initial()};
    seen[a.initial()] = true;
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        order.push_back(q);
        for (const auto& t : a.outgoing(q))
            if (!seen[t.target]) {
                seen[t.target] = true;
                work.push_back(t.target);
            }
    }
    std::vector<std::map<std::string, std::string>> names(a.rank());
    std::vector<std::size_t> remap(a.num_states(), 0);
    std::vector<StateVector> states;
    for (auto q : order) {
        StateVector v(a.rank());
        for (std::size_t i = 0; i < a.rank(); ++i) {
            auto& m = names[i];
            auto it = m.find(a.state(q)[i]);
            if (it == m.end())
                it = m.emplace(a.state(q)[i], "q" + std::to_string(m.size())).first;
            v[i] = it->second;
        }
        remap[q] = states.size();
        states.push_back(std::move(v));
    }
    std::vector<std::size_t> finals;
    for (auto f : a.finals())
        if (seen[f])
            finals.push_back(remap[f]);
    std::vector<Transition> ts;
    for (const auto& t : a.transitions())
        if (seen[t.source])
            ts.push_back({remap[t.source], t.label, remap[t.target]});
    return ContractAutomaton(a.rank(), std::move(states), 0, std::move(finals), std::move(ts),
                             used_alphabet(ts));
}

namespace {

/// Colour refinement over states: initial colour from finality and the label
/// multisets, refined by successor/predecessor colours until stable.
std::vector<std::size_t> refine(const ContractAutomaton& a, std::map<std::vector<long>, std::size_t>& palette,
                                std::vector<std::vector<long>>& signatures, int rounds)
{
    const std::size_t n = a.num_states();
    std::vector<std::size_t> colour(n, 0);
    for (int r = 0; r <= rounds; ++r) {
        signatures.assign(n, {});
        for (std::size_t q = 0; q < n; ++q) {
            auto& s = signatures[q];
            s.push_back(a.is_final(q));
            s.push_back(q == a.initial());
            if (r > 0)
                s.push_back(static_cast<long>(colour[q]));
        }
        std::vector<std::vector<std::pair<std::string, long>>> out(n), in(n);
        for (const auto& t : a.transitions()) {
            out[t.source].push_back({t.label.to_string(), r ? static_cast<long>(colour[t.target]) : 0});
            in[t.target].push_back({t.label.to_string(), r ? static_cast<long>(colour[t.source]) : 0});
        }
        std::vector<std::size_t> next(n);
        for (std::size_t q = 0; q < n; ++q) {
            std::sort(out[q].begin(), out[q].end());
            std::sort(in[q].begin(), in[q].end());
            auto& s = signatures[q];
            s.push_back(-1);
            for (auto& [l, c] : out[q]) {
                s.push_back(static_cast<long>(std::hash<std::string>{}(l) & 0x7fffffff));
                s.push_back(c);
            }
            s.push_back(-2);
            for (auto& [l, c] : in[q]) {
                s.push_back(static_cast<long>(std::hash<std::string>{}(l) & 0x7fffffff));
                s.push_back(c);
            }
            next[q] = palette.emplace(s, palette.size()).first->second;
        }
        colour.swap(next);
    }
    return colour;
}

}  // namespace

bool isomorphic(const ContractAutomaton& a0, const ContractAutomaton& b0)
{
    auto a = trim(a0);
    auto b = trim(b0);
    if (a.rank() != b.rank() || a.num_states() != b.num_states() ||
        a.transitions().size() != b.transitions().size() || a.finals().size() != b.finals().size())
        return false;
    const std::size_t n = a.num_states();
    // A shared palette makes colours comparable across the two automata.
    std::map<std::vector<long>, std::size_t> palette;
    std::vector<std::vector<long>> sa, sb;
    const int rounds = static_cast<int>(std::min<std::size_t>(n, 8));
    auto ca = refine(a, palette, sa, rounds);
    auto cb = refine(b, palette, sb, rounds);
    {
        auto x = ca, y = cb;
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        if (x != y)
            return false;
    }

    std::map<std::pair<std::size_t, std::size_t>, std::multiset<ActionVector>> ea, eb;
    for (const auto& t : a.transitions())
        ea[{t.source, t.target}].insert(t.label);
    for (const auto& t : b.transitions())
        eb[{t.source, t.target}].insert(t.label);
    auto edges = [](const auto& m, std::size_t s, std::size_t t) {
        auto it = m.find({s, t});
        return it == m.end() ? std::multiset<ActionVector>{} : it->second;
    };

    std::vector<std::size_t> order;
    {
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> work{a.initial()};
        seen[a.initial()] = true;
        while (!work.empty()) {
            auto q = work.front();
            work.pop_front();
            order.push_back(q);
            for (const auto& t : a.outgoing(q))
                if (!seen[t.target]) {
                    seen[t.target] = true;
                    work.push_back(t.target);
                }
        }
    }
    std::vector<std::size_t> map(n, n), inv(n, n);
    std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
        if (k == order.size())
            return true;
        auto q = order[k];
        for (std::size_t r = 0; r < n; ++r) {
            if (inv[r] != n || cb[r] != ca[q])
                continue;
            if ((q == a.initial()) != (r == b.initial()))
                continue;
            bool ok = edges(ea, q, q) == edges(eb, r, r);
            for (std::size_t j = 0; ok && j < k; ++j) {
                auto p = order[j];
                ok = edges(ea, q, p) == edges(eb, r, map[p]) && edges(ea, p, q) == edges(eb, map[p], r);
            }
            if (!ok)
                continue;
            map[q] = r;
            inv[r] = q;
            if (go(k + 1))
                return true;
            map[q] = n;
            inv[r] = n;
        }
        return false;
    };
    return go(0);
}

}  // namespace cak
