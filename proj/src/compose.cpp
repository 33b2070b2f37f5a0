#include "cak/compose.hpp"

#include "cak/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cak {

namespace {

ActionVector merge_match(const ActionVector& left, std::size_t left_off, const ActionVector& right,
                         std::size_t right_off, std::size_t rank)
{
    std::vector<BasicAction> e(rank);
    for (std::size_t k = 0; k < left.rank(); ++k)
        e[left_off + k] = left[k];
    for (std::size_t k = 0; k < right.rank(); ++k)
        if (!right[k].is_idle())
            e[right_off + k] = right[k];
    return ActionVector(std::move(e));
}

}  // namespace

ContractAutomaton product(std::span<const ContractAutomaton> comps)
{
    if (comps.empty())
        throw Error(ErrorKind::EmptyComponentList, "product of an empty list of automata");
    const std::size_t n = comps.size();
    std::vector<std::size_t> offset(n, 0), stride(n, 1);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        offset[i] = rank;
        rank += comps[i].rank();
    }
    std::size_t total = 1;
    for (std::size_t i = n; i-- > 0;) {
        stride[i] = total;
        total *= comps[i].num_states();
    }

    std::vector<StateVector> states;
    states.reserve(total);
    std::vector<std::size_t> local(n, 0);
    std::vector<std::size_t> finals;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        StateVector q;
        q.reserve(rank);
        bool fin = true;
        for (std::size_t i = 0; i < n; ++i) {
            local[i] = rest / stride[i];
            rest %= stride[i];
            const auto& s = comps[i].state(local[i]);
            q.insert(q.end(), s.begin(), s.end());
            fin = fin && comps[i].is_final(local[i]);
        }
        states.push_back(std::move(q));
        if (fin)
            finals.push_back(idx);
    }

    std::vector<Transition> ts;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = 0; i < n; ++i) {
            local[i] = rest / stride[i];
            rest %= stride[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& ti : comps[i].outgoing(local[i])) {
                bool blocked = false;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i)
                        continue;
                    for (const auto& tj : comps[j].outgoing(local[j])) {
                        if (!complementary(ti.label, tj.label))
                            continue;
                        blocked = true;
                        if (j > i) {
                            std::size_t target = idx + (ti.target - local[i]) * stride[i] +
                                                 (tj.target - local[j]) * stride[j];
                            ts.push_back({idx,
                                          merge_match(ti.label, offset[i], tj.label, offset[j], rank),
                                          target});
                        }
                    }
                }
                if (!blocked) {
                    std::size_t target = idx + (ti.target - local[i]) * stride[i];
                    ts.push_back({idx,
                                  ti.label.padded(offset[i], rank - offset[i] - ti.label.rank()),
                                  target});
                }
            }
        }
    }

    Alphabet alpha;
    std::vector<std::string> names;
    std::size_t init = 0;
    for (std::size_t i = 0; i < n; ++i) {
        alpha.requests.insert(comps[i].requests().begin(), comps[i].requests().end());
        alpha.offers.insert(comps[i].offers().begin(), comps[i].offers().end());
        names.insert(names.end(), comps[i].principal_names().begin(),
                     comps[i].principal_names().end());
        init += comps[i].initial() * stride[i];
    }
    // Clashing names (typically the default "1" of every principal) fall back to positions.
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
        for (std::size_t i = 0; i < names.size(); ++i)
            names[i] = std::to_string(i + 1);
    return ContractAutomaton(rank, std::move(states), init, std::move(finals), std::move(ts),
                             std::move(alpha), std::move(names));
}

ContractAutomaton product(const ContractAutomaton& a, const ContractAutomaton& b)
{
    std::vector<ContractAutomaton> v{a, b};
    return product(v);
}

ContractAutomaton projection(const ContractAutomaton& a, std::size_t i)
{
    if (i >= a.rank())
        throw Error(ErrorKind::IndexOutOfRange,
                    "projection index " + std::to_string(i + 1) + " outside 1.." +
                        std::to_string(a.rank()));
    std::map<std::string, std::size_t> ids;
    std::vector<StateVector> states;
    auto id = [&](const std::string& s) {
        auto [it, fresh] = ids.emplace(s, states.size());
        if (fresh)
            states.push_back({s});
        return it->second;
    };
    std::size_t init = id(a.state(a.initial())[i]);
    for (const auto& q : a.states())
        id(q[i]);
    std::vector<std::size_t> finals;
    for (auto f : a.finals())
        finals.push_back(id(a.state(f)[i]));
    std::vector<Transition> ts;
    for (const auto& t : a.transitions())
        if (t.label.is_active(i))
            ts.push_back({id(a.state(t.source)[i]), ActionVector({t.label[i]}),
                          id(a.state(t.target)[i])});
    return ContractAutomaton(1, std::move(states), init, std::move(finals), std::move(ts),
                             std::nullopt, {a.principal_names()[i]});
}

ContractAutomaton a_product(std::span<const ContractAutomaton> operands)
{
    std::vector<ContractAutomaton> principals;
    for (const auto& op : operands)
        for (std::size_t i = 0; i < op.rank(); ++i)
            principals.push_back(op.rank() == 1 ? op : projection(op, i));
    return product(principals);
}

ContractAutomaton a_product(const ContractAutomaton& a, const ContractAutomaton& b)
{
    std::vector<ContractAutomaton> v{a, b};
    return a_product(v);
}

ContractAutomaton concatenate(const ContractAutomaton& a, const ContractAutomaton& b)
{
    if (a.rank() != 1 || b.rank() != 1)
        throw Error(ErrorKind::NotPrincipal, "concatenation is defined on principals only");
    if (a.has_cycle())
        throw Error(ErrorKind::CyclicLeftOperand, "left operand of concatenation has a cycle");
    // A final state of `a` without continuations is identified with the
    // initial state of `b`; other final states keep their own continuations
    // and also jump into `b`.
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(a.num_states(), none);
    std::vector<StateVector> states;
    for (std::size_t q = 0; q < a.num_states(); ++q)
        if (!(a.is_final(q) && a.outgoing(q).empty())) {
            index[q] = states.size();
            states.push_back({"l." + a.state(q)[0]});
        }
    const std::size_t shift = states.size();
    for (const auto& q : b.states())
        states.push_back({"r." + q[0]});
    const std::size_t b0 = shift + b.initial();
    auto at = [&](std::size_t q) { return index[q] == none ? b0 : index[q]; };

    std::vector<Transition> ts;
    for (const auto& t : a.transitions()) {
        ts.push_back({at(t.source), t.label, at(t.target)});
        if (a.is_final(t.target) && index[t.target] != none)
            ts.push_back({at(t.source), t.label, b0});
    }
    for (const auto& t : b.transitions())
        ts.push_back({t.source + shift, t.label, t.target + shift});
    std::vector<std::size_t> finals;
    for (auto f : b.finals())
        finals.push_back(f + shift);
    const std::size_t init = at(a.initial());
    if (a.is_final(a.initial()) && index[a.initial()] != none) {
        for (const auto& t : b.outgoing(b.initial()))
            ts.push_back({init, t.label, t.target + shift});
        if (b.is_final(b.initial()))
            finals.push_back(init);
    }
    Alphabet alpha = a.alphabet();
    alpha.requests.insert(b.requests().begin(), b.requests().end());
    alpha.offers.insert(b.offers().begin(), b.offers().end());
    ContractAutomaton r(1, std::move(states), init, std::move(finals), std::move(ts),
                        std::move(alpha), a.principal_names());
    return prune(r);
}

ContractAutomaton trim(const ContractAutomaton& a)
{
    return restrict_states(a, reachable_states(a));
}

ContractAutomaton prune(const ContractAutomaton& a)
{
    auto keep = reachable_states(a);
    auto co = coreachable_states(a);
    for (std::size_t i = 0; i < keep.size(); ++i)
        keep[i] = keep[i] && co[i];
    return restrict_states(a, keep);
}

bool is_deterministic(const ContractAutomaton& a)
{
    for (std::size_t q = 0; q < a.num_states(); ++q) {
        auto out = a.outgoing(q);
        for (std::size_t k = 1; k < out.size(); ++k)
            if (out[k].label == out[k - 1].label)
                return false;
    }
    return true;
}

ContractAutomaton determinize(const ContractAutomaton& a)
{
    if (a.rank() != 1)
        throw Error(ErrorKind::NotPrincipal, "determinization is provided for principals only");
    using Subset = std::vector<std::size_t>;
    std::map<Subset, std::size_t> ids;
    std::vector<Subset> subsets;
    auto id = [&](const Subset& s) {
        auto [it, fresh] = ids.emplace(s, subsets.size());
        if (fresh)
            subsets.push_back(s);
        return it->second;
    };
    id({a.initial()});
    std::vector<Transition> ts;
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        std::map<ActionVector, std::set<std::size_t>> succ;
        for (auto q : subsets[k])
            for (const auto& t : a.outgoing(q))
                succ[t.label].insert(t.target);
        for (auto& [label, targets] : succ) {
            std::size_t to = id(Subset(targets.begin(), targets.end()));
            ts.push_back({k, label, to});
        }
    }
    std::vector<StateVector> states;
    std::vector<std::size_t> finals;
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        std::vector<std::string> parts;
        for (auto s : subsets[k])
            parts.push_back(a.state(s)[0]);
        std::sort(parts.begin(), parts.end());
        std::string name = "{";
        for (std::size_t p = 0; p < parts.size(); ++p)
            name += (p ? "|" : "") + parts[p];
        states.push_back({name + "}"});
        if (std::any_of(subsets[k].begin(), subsets[k].end(),
                        [&](std::size_t s) { return a.is_final(s); }))
            finals.push_back(k);
    }
    return ContractAutomaton(a.rank(), std::move(states), 0, std::move(finals), std::move(ts),
                             a.alphabet(), a.principal_names());
}

}  // namespace cak
