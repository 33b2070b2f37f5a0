#include "cak/automaton.hpp"

#include "cak/error.hpp"

#include <algorithm>
#include <deque>

namespace cak {

std::string to_string(const StateVector& q)
{
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i)
            s += ",";
        s += q[i];
    }
    return s + ")";
}

Alphabet used_alphabet(const std::vector<Transition>& transitions)
{
    Alphabet a;
    for (const auto& t : transitions)
        for (const auto& e : t.label.entries()) {
            if (e.is_request())
                a.requests.insert(e.name);
            else if (e.is_offer())
                a.offers.insert(e.name);
        }
    return a;
}

ContractAutomaton::ContractAutomaton(std::size_t rank, std::vector<StateVector> states,
                                     std::size_t initial, std::vector<std::size_t> finals,
                                     std::vector<Transition> transitions,
                                     std::optional<Alphabet> alphabet,
                                     std::vector<std::string> principal_names)
    : rank_(rank), states_(std::move(states)), initial_(initial), finals_(std::move(finals)),
      transitions_(std::move(transitions)), principal_names_(std::move(principal_names))
{
    auto bad = [](const std::string& m) { throw Error(ErrorKind::MalformedAutomaton, m); };
    if (rank_ == 0)
        bad("rank must be positive");
    if (states_.empty())
        bad("automaton without states");
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].size() != rank_)
            bad("state " + to_string(states_[i]) + " does not have rank " + std::to_string(rank_));
        if (!index_.emplace(states_[i], i).second)
            bad("duplicate state " + to_string(states_[i]));
    }
    if (initial_ >= states_.size())
        bad("initial state index out of range");
    std::sort(finals_.begin(), finals_.end());
    finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
    final_mask_.assign(states_.size(), false);
    for (auto f : finals_) {
        if (f >= states_.size())
            bad("final state index out of range");
        final_mask_[f] = true;
    }
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    for (const auto& t : transitions_) {
        if (t.source >= states_.size() || t.target >= states_.size())
            bad("transition endpoint out of range");
        if (t.label.rank() != rank_)
            bad("label " + t.label.to_string() + " does not have rank " + std::to_string(rank_));
        // Normalization's dummy transitions jump all coordinates to a fresh state.
        if (t.label.name() == done_action)
            continue;
        const auto& q = states_[t.source];
        const auto& r = states_[t.target];
        for (std::size_t i = 0; i < rank_; ++i)
            if (t.label[i].is_idle() && q[i] != r[i])
                bad("idle principal " + std::to_string(i + 1) + " moves in transition " +
                    to_string(q) + " " + t.label.to_string() + " " + to_string(r));
    }
    offsets_.assign(states_.size() + 1, 0);
    for (const auto& t : transitions_)
        ++offsets_[t.source + 1];
    for (std::size_t i = 0; i < states_.size(); ++i)
        offsets_[i + 1] += offsets_[i];

    Alphabet used = used_alphabet(transitions_);
    if (alphabet) {
        for (const auto& n : used.requests)
            if (!alphabet->requests.count(n))
                bad("request '" + n + "' not declared");
        for (const auto& n : used.offers)
            if (!alphabet->offers.count(n))
                bad("offer '" + n + "' not declared");
        for (const auto& n : alphabet->requests)
            if (!is_valid_action_name(n))
                bad("invalid action name '" + n + "'");
        for (const auto& n : alphabet->offers)
            if (!is_valid_action_name(n))
                bad("invalid action name '" + n + "'");
        alphabet_ = std::move(*alphabet);
    } else {
        alphabet_ = std::move(used);
    }
    if (rank_ == 1) {
        for (const auto& n : alphabet_.requests)
            if (alphabet_.offers.count(n))
                throw Error(ErrorKind::SelfComplementaryPrincipal,
                            "principal both requests and offers '" + n + "'");
    }
    if (principal_names_.empty()) {
        for (std::size_t i = 1; i <= rank_; ++i)
            principal_names_.push_back(std::to_string(i));
    } else if (principal_names_.size() != rank_) {
        bad("principal_names must have one entry per principal");
    }
}

std::optional<std::size_t> ContractAutomaton::find_state(const StateVector& q) const
{
    auto it = index_.find(q);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::span<const Transition> ContractAutomaton::outgoing(std::size_t i) const
{
    return std::span<const Transition>(transitions_.data() + offsets_.at(i),
                                       offsets_.at(i + 1) - offsets_.at(i));
}

std::optional<std::size_t> ContractAutomaton::find_transition(const Transition& t) const
{
    auto it = std::lower_bound(transitions_.begin(), transitions_.end(), t);
    if (it == transitions_.end() || !(*it == t))
        return std::nullopt;
    return static_cast<std::size_t>(it - transitions_.begin());
}

bool ContractAutomaton::has_cycle() const
{
    // Kahn's algorithm; self-loops count as cycles.
    std::vector<std::size_t> indeg(states_.size(), 0);
    for (const auto& t : transitions_)
        ++indeg[t.target];
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (!indeg[i])
            stack.push_back(i);
    std::size_t seen = 0;
    while (!stack.empty()) {
        auto q = stack.back();
        stack.pop_back();
        ++seen;
        for (const auto& t : outgoing(q))
            if (--indeg[t.target] == 0)
                stack.push_back(t.target);
    }
    return seen != states_.size();
}

std::vector<bool> reachable_states(const ContractAutomaton& a)
{
    std::vector<bool> seen(a.num_states(), false);
    std::deque<std::size_t> work{a.initial()};
    seen[a.initial()] = true;
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        for (const auto& t : a.outgoing(q))
            if (!seen[t.target]) {
                seen[t.target] = true;
                work.push_back(t.target);
            }
    }
    return seen;
}

std::vector<bool> coreachable_states(const ContractAutomaton& a)
{
    std::vector<std::vector<std::size_t>> back(a.num_states());
    for (const auto& t : a.transitions())
        back[t.target].push_back(t.source);
    std::vector<bool> seen(a.num_states(), false);
    std::deque<std::size_t> work;
    for (auto f : a.finals()) {
        seen[f] = true;
        work.push_back(f);
    }
    while (!work.empty()) {
        auto q = work.front();
        work.pop_front();
        for (auto p : back[q])
            if (!seen[p]) {
                seen[p] = true;
                work.push_back(p);
            }
    }
    return seen;
}

ContractAutomaton restrict_states(const ContractAutomaton& a, const std::vector<bool>& keep,
                                  bool restrict_alphabet)
{
    std::vector<std::size_t> remap(a.num_states(), static_cast<std::size_t>(-1));
    std::vector<StateVector> states;
    for (std::size_t i = 0; i < a.num_states(); ++i)
        if (keep[i] || i == a.initial()) {
            remap[i] = states.size();
            states.push_back(a.state(i));
        }
    std::vector<std::size_t> finals;
    for (auto f : a.finals())
        if (remap[f] != static_cast<std::size_t>(-1))
            finals.push_back(remap[f]);
    std::vector<Transition> ts;
    for (const auto& t : a.transitions())
        if (remap[t.source] != static_cast<std::size_t>(-1) &&
            remap[t.target] != static_cast<std::size_t>(-1))
            ts.push_back({remap[t.source], t.label, remap[t.target]});
    std::optional<Alphabet> alpha;
    if (!restrict_alphabet)
        alpha = a.alphabet();
    return ContractAutomaton(a.rank(), std::move(states), remap[a.initial()], std::move(finals),
                             std::move(ts), std::move(alpha), a.principal_names());
}

}  // namespace cak
