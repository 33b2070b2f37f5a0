#include "cak/weak.hpp"

#include "cak/compose.hpp"
#include "cak/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace cak {

namespace {

void require_rank(std::size_t rank)
{
    if (rank < 2)
        throw Error(ErrorKind::RankTooSmall, "weak agreement is defined for rank greater than 1");
}

std::vector<std::size_t> add_flow_block(MilpModel& m, const ContractAutomaton& a, std::size_t s,
                                        std::size_t d, std::size_t cap)
{
    std::vector<std::size_t> x;
    for (std::size_t k = 0; k < a.transitions().size(); ++k)
        x.push_back(m.add_variable("x" + std::to_string(k), VarKind::Integer, Rational(0), Rational(cap)));
    std::vector<LinearTerms> rows(a.num_states());
    for (std::size_t k = 0; k < a.transitions().size(); ++k) {
        const auto& t = a.transitions()[k];
        if (t.source == t.target)
            continue;
        rows[t.target].push_back({x[k], 1});
        rows[t.source].push_back({x[k], -1});
    }
    for (std::size_t q = 0; q < a.num_states(); ++q) {
        Rational rhs = 0;
        if (s != d)
            rhs = q == s ? -1 : q == d ? 1 : 0;
        m.add_constraint(std::move(rows[q]), Relation::Equal, rhs, "bal" + std::to_string(q));
    }
    return x;
}

/// Single-commodity connectivity: the source ships one unit to every tracked
/// state that has outgoing flow, along transitions used by x only.
struct Connectivity {
    std::map<std::size_t, std::size_t> p;
    std::map<std::size_t, std::size_t> z;
};

Connectivity add_connectivity(MilpModel& m, const ContractAutomaton& a, const std::vector<std::size_t>& x,
                              std::size_t s, const std::vector<std::size_t>& tracked, std::size_t cap)
{
    Connectivity c;
    const auto& ts = a.transitions();
    const Rational ship(a.num_states());
    std::vector<LinearTerms> rows(a.num_states());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (ts[k].source == ts[k].target)
            continue;
        auto z = m.add_variable("z" + std::to_string(k), VarKind::Continuous, Rational(0));
        c.z[k] = z;
        m.add_constraint({{z, 1}, {x[k], -ship}}, Relation::LessEq, 0);
        rows[ts[k].target].push_back({z, 1});
        rows[ts[k].source].push_back({z, -1});
    }
    for (auto q : tracked) {
        const std::string tag = std::to_string(q);
        auto p = m.add_variable("p" + tag, VarKind::Binary);
        c.p[q] = p;
        rows[q].push_back({p, -1});
        LinearTerms out;
        for (std::size_t k = a.outgoing_offset(q); k < a.outgoing_offset(q) + a.outgoing(q).size(); ++k)
            out.push_back({x[k], 1});
        const std::size_t big_m = cap * out.size();
        LinearTerms low = out, high = out;
        low.push_back({p, -1});
        m.add_constraint(std::move(low), Relation::GreaterEq, 0, "plo" + tag);
        high.push_back({p, -Rational(big_m)});
        m.add_constraint(std::move(high), Relation::LessEq, 0, "phi" + tag);
    }
    for (std::size_t r = 0; r < a.num_states(); ++r)
        if (r != s)
            m.add_constraint(std::move(rows[r]), Relation::Equal, 0, "zbal" + std::to_string(r));
    return c;
}

std::vector<std::size_t> to_counts(const std::vector<Rational>& assignment, const std::vector<std::size_t>& x)
{
    std::vector<std::size_t> r;
    for (auto v : x)
        r.push_back(static_cast<std::size_t>(assignment[v].get_num().get_ui()));
    return r;
}

MilpOutcome checked(MilpOutcome out)
{
    if (out.status == MilpStatus::CapExceeded)
        throw Error(ErrorKind::CapExceeded, "MILP node budget exhausted");
    return out;
}

Trace strip_dummy(Trace w)
{
    if (!w.empty() && is_dummy(w.back()))
        w.pop_back();
    return w;
}

}  // namespace

bool in_weak_agreement(const Trace& w)
{
    auto r = trace_rank(w);
    if (r)
        require_rank(*r);
    auto obs = observable(w);
    std::vector<bool> used(obs.size(), false);
    // For each request, consume some unused offer on the same name.
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (obs[i].kind != Observation::Kind::Request)
            continue;
        bool found = false;
        for (std::size_t j = 0; j < obs.size() && !found; ++j) {
            if (!used[j] && obs[j].kind == Observation::Kind::Offer && obs[j].name == obs[i].name) {
                used[j] = true;
                found = true;
            }
        }
        if (!found)
            return false;
    }
    return true;
}

bool is_dummy(const ActionVector& label) noexcept
{
    return label.rank() > 0 && label.is_offer() && label.name() == done_action;
}

ContractAutomaton normalize(const ContractAutomaton& a)
{
    auto co = coreachable_states(a);
    if (!co[a.initial()])
        throw Error(ErrorKind::EmptyLanguage, "no final state is reachable from the initial state");
    auto p = prune(a);
    if (p.finals().size() == 1 && p.finals()[0] != p.initial() && p.outgoing(p.finals()[0]).empty())
        return p;
    auto states = p.states();
    StateVector fresh(p.rank(), std::string(done_action));
    while (p.find_state(fresh))
        for (auto& s : fresh)
            s += "'";
    const std::size_t f = states.size();
    states.push_back(fresh);
    auto ts = p.transitions();
    for (auto q : p.finals())
        ts.push_back({q, ActionVector::offer(p.rank(), 0, std::string(done_action)), f});
    Alphabet alpha = p.alphabet();
    alpha.offers.insert(std::string(done_action));
    return ContractAutomaton(p.rank(), std::move(states), p.initial(), {f}, std::move(ts), std::move(alpha),
                             p.principal_names());
}

std::vector<std::string> balance_actions(const ContractAutomaton& n)
{
    std::set<std::string> names;
    for (const auto& t : n.transitions())
        for (const auto& e : t.label.entries())
            if (e.is_request() && e.name != done_action)
                names.insert(e.name);
    return {names.begin(), names.end()};
}

std::vector<std::vector<int>> balance_coefficients(const ContractAutomaton& n,
                                                   const std::vector<std::string>& actions)
{
    std::vector<std::vector<int>> c(actions.size(), std::vector<int>(n.transitions().size(), 0));
    for (std::size_t i = 0; i < actions.size(); ++i)
        for (std::size_t k = 0; k < n.transitions().size(); ++k) {
            const auto& l = n.transitions()[k].label;
            if (l.is_match() || l.name() != actions[i])
                continue;
            c[i][k] = l.is_offer() ? 1 : -1;
        }
    return c;
}

std::size_t default_flow_cap(const ContractAutomaton& n)
{
    return n.num_states() + 2 * balance_actions(n).size();
}

FlowSystem build_flow_system(const ContractAutomaton& n, std::size_t s, std::size_t d, std::optional<std::size_t> cap)
{
    if (s >= n.num_states() || d >= n.num_states())
        throw Error(ErrorKind::UnknownState, "flow endpoint is not a state of the automaton");
    FlowSystem fs;
    fs.source = s;
    fs.dest = d;
    fs.cap = cap ? *cap : default_flow_cap(n);
    fs.x_vars = add_flow_block(fs.model, n, s, d, fs.cap);
    std::vector<std::size_t> others;
    for (std::size_t q = 0; q < n.num_states(); ++q)
        if (q != s)
            others.push_back(q);
    auto c = add_connectivity(fs.model, n, fs.x_vars, s, others, fs.cap);
    fs.p_vars = std::move(c.p);
    fs.z_vars = std::move(c.z);
    fs.action_index = balance_actions(n);
    fs.coeffs = balance_coefficients(n, fs.action_index);
    return fs;
}

FlowSystem build_flow_system(const ContractAutomaton& n, const StateVector& s, const StateVector& d,
                             std::optional<std::size_t> cap)
{
    auto si = n.find_state(s), di = n.find_state(d);
    if (!si)
        throw Error(ErrorKind::UnknownState, "unknown state " + to_string(s));
    if (!di)
        throw Error(ErrorKind::UnknownState, "unknown state " + to_string(d));
    return build_flow_system(n, *si, *di, cap);
}

bool is_flow(const ContractAutomaton& a, std::size_t s, std::size_t d, const std::vector<std::size_t>& x)
{
    if (x.size() != a.transitions().size())
        return false;
    std::vector<long long> net(a.num_states(), 0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto& t = a.transitions()[k];
        net[t.target] += static_cast<long long>(x[k]);
        net[t.source] -= static_cast<long long>(x[k]);
    }
    for (std::size_t q = 0; q < a.num_states(); ++q) {
        long long want = s == d ? 0 : q == s ? -1 : q == d ? 1 : 0;
        if (net[q] != want)
            return false;
    }
    return true;
}

std::vector<std::size_t> flow_to_run(const ContractAutomaton& a, std::size_t s, std::size_t d,
                                     const std::vector<std::size_t>& x)
{
    if (!is_flow(a, s, d, x))
        throw Error(ErrorKind::InfeasibleFlow, "assignment violates the flow balance");
    std::vector<std::vector<std::size_t>> incoming(a.num_states());
    for (std::size_t k = 0; k < a.transitions().size(); ++k)
        incoming[a.transitions()[k].target].push_back(k);
    std::vector<std::size_t> residual = x, next(a.num_states(), 0);
    // Hierholzer on the reversed multigraph, starting at the destination: the
    // backward walk takes the lowest-index transition with residual flow and
    // splices in the cycles it closes.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{d, static_cast<std::size_t>(-1)}};
    std::vector<std::size_t> reversed_run;
    while (!stack.empty()) {
        auto q = stack.back().first;
        auto& ptr = next[q];
        while (ptr < incoming[q].size() && residual[incoming[q][ptr]] == 0)
            ++ptr;
        if (ptr < incoming[q].size()) {
            auto k = incoming[q][ptr];
            --residual[k];
            stack.push_back({a.transitions()[k].source, k});
        } else {
            if (stack.back().second != static_cast<std::size_t>(-1))
                reversed_run.push_back(stack.back().second);
            stack.pop_back();
        }
    }
    if (std::any_of(residual.begin(), residual.end(), [](std::size_t r) { return r != 0; }))
        throw Error(ErrorKind::InfeasibleFlow, "flow has a cycle disconnected from the run");
    // reversed_run lists transitions from the first to the last of the run.
    std::vector<std::size_t> run = reversed_run;
    std::size_t q = s;
    for (auto k : run) {
        if (a.transitions()[k].source != q)
            throw Error(ErrorKind::InfeasibleFlow, "flow does not induce a run");
        q = a.transitions()[k].target;
    }
    if (q != d)
        throw Error(ErrorKind::InfeasibleFlow, "flow does not induce a run");
    return run;
}

Trace flow_to_trace(const ContractAutomaton& a, const std::vector<std::size_t>& x)
{
    if (a.finals().size() != 1)
        throw Error(ErrorKind::InfeasibleFlow, "flow_to_trace needs a single final state");
    Trace w;
    for (auto k : flow_to_run(a, a.initial(), a.finals()[0], x))
        w.push_back(a.transitions()[k].label);
    return w;
}

MilpOutcome solve_flow_model(MilpModel model, const ContractAutomaton& a, std::size_t s,
                             const std::vector<std::size_t>& x, std::size_t cap, const WeakOptions& options)
{
    const std::size_t structural = model.variables().size();
    if (!options.lazy_connectivity) {
        std::vector<std::size_t> others;
        for (std::size_t q = 0; q < a.num_states(); ++q)
            if (q != s)
                others.push_back(q);
        add_connectivity(model, a, x, s, others, cap);
    }
    const auto& ts = a.transitions();
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::optional<MilpOutcome> connected;
    for (std::size_t round = 0;; ++round) {
        auto out = checked(solve_milp(model, options.milp));
        if (out.status != MilpStatus::Optimal)
            return out;
        // Each round's optimum bounds all later ones, so a connected flow
        // reaching it is optimal.
        if (connected && connected->value == out.value)
            return *connected;
        auto counts = to_counts(out.assignment, x);
        std::vector<bool> seen(a.num_states(), false);
        std::deque<std::size_t> work{s};
        seen[s] = true;
        while (!work.empty()) {
            auto q = work.front();
            work.pop_front();
            for (std::size_t k = a.outgoing_offset(q); k < a.outgoing_offset(q) + a.outgoing(q).size(); ++k)
                if (counts[k] > 0 && !seen[ts[k].target]) {
                    seen[ts[k].target] = true;
                    work.push_back(ts[k].target);
                }
        }
        bool disconnected = false;
        for (std::size_t k = 0; k < ts.size(); ++k)
            disconnected = disconnected || (!seen[ts[k].source] && counts[k] > 0);
        if (!disconnected) {
            out.assignment.resize(structural);
            return out;
        }
        // No flow enters the unreached part, so by conservation none leaves it:
        // dropping it leaves a connected flow. Re-optimizing the remaining
        // variables with that flow fixed gives a feasible solution.
        MilpModel fixed = model;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            Rational v(seen[ts[k].source] ? counts[k] : 0);
            fixed.variable(x[k]).lower = v;
            fixed.variable(x[k]).upper = v;
        }
        auto repaired = checked(solve_milp(fixed, options.milp));
        if (repaired.status == MilpStatus::Optimal &&
            (!connected || (model.sense() == Sense::Maximize ? repaired.value > connected->value
                                                             : repaired.value < connected->value))) {
            repaired.assignment.resize(structural);
            connected = std::move(repaired);
            if (connected->value == out.value)
                return *connected;
        }
        // A transition leaving a set S of states unreached from s carries at
        // most cap units, and none unless flow enters S:
        //   x_t ≤ cap · Σ_{t' enters S} x_t'.
        // Every connected flow satisfies these rows. They are added for the
        // used transitions leaving the whole unreached set, and for all
        // transitions leaving each weakly connected piece of the unreached support.
        std::vector<std::size_t> piece(a.num_states(), npos);
        std::vector<std::vector<std::size_t>> pieces{{}};
        for (std::size_t q = 0; q < a.num_states(); ++q)
            if (!seen[q])
                pieces[0].push_back(q);
        for (std::size_t q = 0; q < a.num_states(); ++q) {
            if (seen[q] || piece[q] != npos)
                continue;
            const std::size_t id = pieces.size();
            pieces.emplace_back();
            std::vector<std::size_t> stack{q};
            piece[q] = id;
            while (!stack.empty()) {
                auto u = stack.back();
                stack.pop_back();
                pieces[id].push_back(u);
                for (std::size_t k = 0; k < ts.size(); ++k) {
                    if (counts[k] == 0 || seen[ts[k].source] || seen[ts[k].target])
                        continue;
                    std::size_t v = ts[k].source == u ? ts[k].target : ts[k].target == u ? ts[k].source : npos;
                    if (v != npos && piece[v] == npos) {
                        piece[v] = id;
                        stack.push_back(v);
                    }
                }
            }
        }
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            std::vector<bool> inside(a.num_states(), false);
            for (auto q : pieces[i])
                inside[q] = true;
            LinearTerms entering;
            for (std::size_t k = 0; k < ts.size(); ++k)
                if (!inside[ts[k].source] && inside[ts[k].target])
                    entering.push_back({x[k], -Rational(cap)});
            for (std::size_t k = 0; k < ts.size(); ++k) {
                if (!inside[ts[k].source] || (i == 0 && counts[k] == 0))
                    continue;
                LinearTerms cut = entering;
                cut.push_back({x[k], 1});
                model.add_constraint(std::move(cut), Relation::LessEq, 0,
                                     "cut" + std::to_string(round) + "_" + std::to_string(i) + "_" +
                                         std::to_string(k));
            }
        }
        // Cuts only remove solutions, so the first optimum bounds all later ones.
        if (round == 0 && !model.objective().empty())
            model.add_constraint(model.objective(),
                                 model.sense() == Sense::Maximize ? Relation::LessEq : Relation::GreaterEq, out.value,
                                 "bound");
    }
}

namespace {

struct Prepared {
    ContractAutomaton n;
    std::vector<std::string> actions;
    std::vector<std::vector<int>> coeffs;
    std::size_t cap;
    std::size_t final_state;
};

Prepared prepare(const ContractAutomaton& a, const WeakOptions& options)
{
    require_rank(a.rank());
    auto n = normalize(a);
    auto actions = balance_actions(n);
    auto coeffs = balance_coefficients(n, actions);
    std::size_t cap = options.cap ? *options.cap : n.num_states() + 2 * actions.size();
    std::size_t f = n.finals()[0];
    return {std::move(n), std::move(actions), std::move(coeffs), cap, f};
}

void fill_witness(WeakVerdict& v, const Prepared& p, const std::vector<Rational>& assignment,
                  const std::vector<std::size_t>& x)
{
    v.witness_flow = to_counts(assignment, x);
    v.witness_trace = strip_dummy(flow_to_trace(p.n, v.witness_flow));
}

}  // namespace

WeakVerdict is_weakly_safe(const ContractAutomaton& a, const WeakOptions& options)
{
    auto p = prepare(a, options);
    WeakVerdict v;
    v.cap = p.cap;
    v.normalized = p.n;
    if (p.actions.empty()) {
        MilpModel m;
        auto x = add_flow_block(m, p.n, p.n.initial(), p.final_state, p.cap);
        auto out = solve_flow_model(m, p.n, p.n.initial(), x, p.cap, options);
        if (out.status != MilpStatus::Optimal)
            throw Error(ErrorKind::EmptyLanguage, "no accepted trace within the flow cap");
        fill_witness(v, p, out.assignment, x);
        return v;
    }
    std::optional<MilpOutcome> best;
    std::vector<std::size_t> best_x;
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
        MilpModel m;
        auto x = add_flow_block(m, p.n, p.n.initial(), p.final_state, p.cap);
        LinearTerms obj;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (p.coeffs[i][k])
                obj.push_back({x[k], p.coeffs[i][k]});
        m.set_objective(Sense::Minimize, std::move(obj));
        auto out = solve_flow_model(std::move(m), p.n, p.n.initial(), x, p.cap, options);
        if (out.status != MilpStatus::Optimal)
            throw Error(ErrorKind::EmptyLanguage, "no accepted trace within the flow cap");
        if (!best || out.value < best->value) {
            best = out;
            best_x = x;
            v.action = p.actions[i];
        }
    }
    v.gamma = best->value;
    v.answer = *v.gamma >= 0;
    fill_witness(v, p, best->assignment, best_x);
    return v;
}

WeakVerdict admits_weak_agreement(const ContractAutomaton& a, const WeakOptions& options)
{
    auto p = prepare(a, options);
    WeakVerdict v;
    v.cap = p.cap;
    v.normalized = p.n;
    MilpModel m;
    auto x = add_flow_block(m, p.n, p.n.initial(), p.final_state, p.cap);
    if (!p.actions.empty()) {
        auto g = m.add_variable("gamma", VarKind::Integer, std::nullopt, std::nullopt);
        for (std::size_t i = 0; i < p.actions.size(); ++i) {
            LinearTerms row{{g, -1}};
            for (std::size_t k = 0; k < x.size(); ++k)
                if (p.coeffs[i][k])
                    row.push_back({x[k], p.coeffs[i][k]});
            m.add_constraint(std::move(row), Relation::GreaterEq, 0, "act_" + p.actions[i]);
        }
        m.set_objective(Sense::Maximize, {{g, 1}});
    }
    auto out = solve_flow_model(std::move(m), p.n, p.n.initial(), x, p.cap, options);
    if (out.status != MilpStatus::Optimal)
        throw Error(ErrorKind::EmptyLanguage, "no accepted trace within the flow cap");
    if (!p.actions.empty()) {
        v.gamma = out.value;
        v.answer = *v.gamma >= 0;
    }
    fill_witness(v, p, out.assignment, x);
    return v;
}

WeakLiabilityReport weakly_liable(const ContractAutomaton& a, const WeakOptions& options)
{
    auto p = prepare(a, options);
    WeakLiabilityReport report;
    report.cap = p.cap;
    if (p.actions.empty())
        return report;
    const std::size_t k_actions = p.actions.size();
    const auto& ts = p.n.transitions();

    // Balances above the largest amount a capped completion can request are
    // saturated; this changes no negative value of G and no sign.
    std::vector<long> ceiling(k_actions, 0);
    for (std::size_t i = 0; i < k_actions; ++i)
        for (std::size_t k = 0; k < ts.size(); ++k)
            if (p.coeffs[i][k] < 0)
                ceiling[i] += static_cast<long>(p.cap);

    using Balance = std::vector<long>;
    std::map<std::pair<std::size_t, Balance>, Rational> memo;
    const Balance zero(k_actions, 0);
    // G(s, b) = max over u ∈ F_{s,qf} of min_i (b_i + Σ_t a^i_t u_t).
    auto completion = [&](std::size_t s, const Balance& b) -> Rational {
        auto key = std::make_pair(s, b);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        Rational value;
        if (s == p.final_state) {
            value = *std::min_element(b.begin(), b.end());
        } else {
            // A completion witnessing G(s, b') gives G(s, b) ≥ G(s, b') + min_i (b_i - b'_i).
            std::optional<Rational> lower;
            for (auto it = memo.lower_bound({s, Balance{}}); it != memo.end() && it->first.first == s; ++it) {
                long shift = std::numeric_limits<long>::max();
                for (std::size_t i = 0; i < k_actions; ++i)
                    shift = std::min(shift, b[i] - it->first.second[i]);
                Rational candidate = it->second + shift;
                if (!lower || candidate > *lower)
                    lower = candidate;
            }
            MilpModel m;
            auto x = add_flow_block(m, p.n, s, p.final_state, p.cap);
            auto g = m.add_variable("gamma", VarKind::Integer, std::nullopt, std::nullopt);
            for (std::size_t i = 0; i < k_actions; ++i) {
                LinearTerms row{{g, -1}};
                for (std::size_t k = 0; k < x.size(); ++k)
                    if (p.coeffs[i][k])
                        row.push_back({x[k], p.coeffs[i][k]});
                m.add_constraint(std::move(row), Relation::GreaterEq, -b[i], "act_" + p.actions[i]);
            }
            m.set_objective(Sense::Maximize, {{g, 1}});
            // Dropping connectivity gives an upper bound; when it meets the
            // lower bound the value is exact.
            auto relaxed = checked(solve_milp(m, options.milp));
            if (relaxed.status != MilpStatus::Optimal)
                throw Error(ErrorKind::EmptyLanguage, "state cannot reach the final state within the flow cap");
            if (lower && *lower >= relaxed.value) {
                value = relaxed.value;
            } else {
                auto out = solve_flow_model(std::move(m), p.n, s, x, p.cap, options);
                if (out.status != MilpStatus::Optimal)
                    throw Error(ErrorKind::EmptyLanguage, "state cannot reach the final state within the flow cap");
                value = out.value;
            }
        }
        memo.emplace(std::move(key), value);
        return value;
    };

    struct Node {
        std::size_t state;
        Balance balance;
        std::size_t parent;
        std::size_t via;
    };
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<Node> nodes;
    std::map<std::pair<std::size_t, Balance>, std::size_t> index;
    if (completion(p.n.initial(), zero) < 0)
        return report;
    nodes.push_back({p.n.initial(), zero, npos, npos});
    index[{p.n.initial(), zero}] = 0;
    std::map<std::size_t, std::pair<Rational, std::size_t>> best;  // transition -> (γ, node)
    for (std::size_t cur = 0; cur < nodes.size(); ++cur) {
        const std::size_t s = nodes[cur].state;
        for (std::size_t k = p.n.outgoing_offset(s); k < p.n.outgoing_offset(s) + p.n.outgoing(s).size(); ++k) {
            const auto& t = ts[k];
            if (is_dummy(t.label))
                continue;
            Balance nb = nodes[cur].balance;
            for (std::size_t i = 0; i < k_actions; ++i)
                nb[i] = std::min(nb[i] + p.coeffs[i][k], ceiling[i]);
            Rational g = completion(t.target, nb);
            auto it = best.find(k);
            if (it == best.end() || g < it->second.first)
                best[k] = {g, cur};
            if (g < 0 || index.count({t.target, nb}))
                continue;
            if (nodes.size() >= options.max_liability_nodes)
                throw Error(ErrorKind::CapExceeded, "weak liability search exceeded its node limit");
            index[{t.target, nb}] = nodes.size();
            nodes.push_back({t.target, std::move(nb), cur, k});
        }
    }
    report.explored = nodes.size();
    auto prefix = [&](std::size_t node) {
        Trace w;
        for (; nodes[node].parent != npos; node = nodes[node].parent)
            w.push_back(ts[nodes[node].via].label);
        std::reverse(w.begin(), w.end());
        return w;
    };
    for (const auto& [k, entry] : best) {
        const auto& t = ts[k];
        Transition orig{*a.find_state(p.n.state(t.source)), t.label, *a.find_state(p.n.state(t.target))};
        report.gamma[orig] = entry.first;
        if (entry.first < 0) {
            report.flagged.push_back({orig, entry.first, prefix(entry.second)});
            for (auto i : t.label.active())
                report.liable.insert(i);
        }
    }
    std::sort(report.flagged.begin(), report.flagged.end(),
              [](const WeakLiabilityEntry& x, const WeakLiabilityEntry& y) { return x.transition < y.transition; });
    return report;
}

}  // namespace cak
