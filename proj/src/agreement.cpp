#include "cak/agreement.hpp"

#include "cak/error.hpp"

#include <algorithm>
#include <deque>

namespace cak {

namespace {

void require_rank(std::size_t rank)
{
    if (rank < 2)
        throw Error(ErrorKind::RankTooSmall, "agreement is defined for rank greater than 1");
}

/// Controller state index for each state of A (or npos), plus the controller.
struct Controller {
    ContractAutomaton automaton;
    std::vector<std::size_t> to_controller;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace

bool in_agreement(const Trace& w)
{
    auto r = trace_rank(w);
    if (r)
        require_rank(*r);
    return std::none_of(w.begin(), w.end(), [](const ActionVector& a) { return a.is_request(); });
}

std::vector<std::size_t> hanged_states(const ContractAutomaton& a)
{
    auto co = coreachable_states(a);
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < co.size(); ++i)
        if (!co[i])
            r.push_back(i);
    return r;
}

MpcResult mpc(const ContractAutomaton& a)
{
    require_rank(a.rank());
    std::vector<Transition> k1, removed;
    for (const auto& t : a.transitions())
        (t.label.is_request() ? removed : k1).push_back(t);
    ContractAutomaton k1_automaton(a.rank(), a.states(), a.initial(), a.finals(), k1, a.alphabet(),
                                   a.principal_names());
    auto co = coreachable_states(k1_automaton);
    std::set<StateVector> hanged;
    for (std::size_t i = 0; i < co.size(); ++i)
        if (!co[i])
            hanged.insert(a.state(i));
    // restrict_states keeps the initial state even when hanged; it then has no
    // surviving transitions and must not be final.
    auto controller = restrict_states(k1_automaton, co);
    if (!co[a.initial()]) {
        controller = ContractAutomaton(a.rank(), {a.state(a.initial())}, 0, {}, {}, a.alphabet(),
                                       a.principal_names());
    }
    return {std::move(controller), std::move(hanged), std::move(removed)};
}

bool admits_agreement(const ContractAutomaton& a)
{
    return !mpc(a).controller.finals().empty();
}

bool is_safe(const ContractAutomaton& a)
{
    auto m = mpc(a);
    auto reach = reachable_states(a);
    auto co = coreachable_states(a);
    for (const auto& t : a.transitions()) {
        if (!reach[t.source] || !co[t.target])
            continue;
        auto s = m.controller.find_state(a.state(t.source));
        auto d = m.controller.find_state(a.state(t.target));
        if (!s || !d || !m.controller.find_transition({*s, t.label, *d}))
            return false;
    }
    return true;
}

LiabilityReport liable(const ContractAutomaton& a)
{
    auto m = mpc(a);
    const auto& k = m.controller;
    auto co = coreachable_states(a);
    LiabilityReport report;
    // Shortest controller runs to every reachable controller state.
    std::vector<std::size_t> parent(k.num_states(), npos);
    std::vector<bool> seen(k.num_states(), false);
    std::deque<std::size_t> work{k.initial()};
    seen[k.initial()] = true;
    std::vector<std::size_t> order;
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        order.push_back(q);
        for (std::size_t j = k.outgoing_offset(q); j < k.outgoing_offset(q) + k.outgoing(q).size(); ++j) {
            const auto& t = k.transitions()[j];
            if (!seen[t.target]) {
                seen[t.target] = true;
                parent[t.target] = j;
                work.push_back(t.target);
            }
        }
    }
    auto prefix_to = [&](std::size_t q) {
        Trace w;
        while (q != k.initial()) {
            const auto& t = k.transitions()[parent[q]];
            w.push_back(t.label);
            q = t.source;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    for (auto kq : order) {
        auto q = *a.find_state(k.state(kq));
        for (const auto& t : a.outgoing(q)) {
            if (!co[t.target])
                continue;
            auto d = k.find_state(a.state(t.target));
            if (d && k.find_transition({kq, t.label, *d}))
                continue;
            for (auto i : t.label.active()) {
                if (t.label.name() == done_action && i == 0 && t.label.is_offer())
                    continue;
                if (report.liable.insert(i).second)
                    report.witnesses[i] = {prefix_to(kq), t, t.label};
            }
        }
    }
    return report;
}

std::set<std::size_t> liable_by_state_exclusion(const ContractAutomaton& a)
{
    auto m = mpc(a);
    const auto& k = m.controller;
    auto reach = reachable_states(k);
    std::set<std::size_t> r;
    for (std::size_t kq = 0; kq < k.num_states(); ++kq) {
        if (!reach[kq])
            continue;
        auto q = *a.find_state(k.state(kq));
        for (const auto& t : a.outgoing(q))
            if (!k.find_state(a.state(t.target)))
                for (auto i : t.label.active())
                    r.insert(i);
    }
    return r;
}

bool competitive(const ContractAutomaton& a, const ContractAutomaton& b)
{
    for (const auto& n : a.offers())
        if (b.offers().count(n) && (a.requests().count(n) || b.requests().count(n)))
            return true;
    return false;
}

bool collaborative(const ContractAutomaton& a, const ContractAutomaton& b)
{
    for (const auto& n : a.offers())
        if (b.requests().count(n))
            return true;
    for (const auto& n : a.requests())
        if (b.offers().count(n))
            return true;
    return false;
}

}  // namespace cak

namespace cak {

std::optional<Trace> agreement_witness(const ContractAutomaton& a)
{
    auto k = mpc(a).controller;
    std::vector<std::size_t> parent(k.num_states(), npos);
    std::vector<bool> seen(k.num_states(), false);
    std::deque<std::size_t> work{k.initial()};
    seen[k.initial()] = true;
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        if (k.is_final(q)) {
            Trace w;
            while (q != k.initial()) {
                const auto& t = k.transitions()[parent[q]];
                w.push_back(t.label);
                q = t.source;
            }
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (std::size_t j = k.outgoing_offset(q); j < k.outgoing_offset(q) + k.outgoing(q).size(); ++j) {
            const auto& t = k.transitions()[j];
            if (!seen[t.target]) {
                seen[t.target] = true;
                parent[t.target] = j;
                work.push_back(t.target);
            }
        }
    }
    return std::nullopt;
}

}  // namespace cak
