#include "support.hpp"

#include "cak/error.hpp"
#include "cak/logic.hpp"
#include "cak/weak.hpp"

#include <doctest.h>

#include <sstream>

using namespace cak;
using namespace cak_test;

namespace {

/// Pending premise indices (1-based) of a lattice state name such as "{1,3,*}".
std::set<std::size_t> pending(const std::string& state)
{
    std::set<std::size_t> r;
    std::stringstream in(state.substr(1, state.size() - 2));
    std::string item;
    while (std::getline(in, item, ','))
        if (item != "*")
            r.insert(std::stoul(item));
    return r;
}

PclFormula random_pcl(Rng& rng)
{
    const std::vector<std::string> atoms{"a", "b", "c", "d"};
    PclFormula p;
    for (std::size_t i = 0, n = pick(rng, 2, 3); i < n; ++i) {
        PclClause c;
        auto kind = pick(rng, 0, 2);
        c.kind = kind == 0 ? PclKind::Conj : kind == 1 ? PclKind::Impl : PclKind::CImpl;
        std::vector<std::string> shuffled = atoms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto k = pick(rng, 1, c.kind == PclKind::Conj ? 2 : 3);
        c.atoms.assign(shuffled.begin(), shuffled.begin() + static_cast<long>(k));
        if (c.kind != PclKind::Conj)
            c.conclusion = shuffled[k];
        p.clauses.push_back(std::move(c));
    }
    return p;
}

std::vector<IllLiteral> random_literals(Rng& rng, std::size_t max)
{
    std::vector<IllLiteral> r;
    for (std::size_t i = 0, n = pick(rng, 1, max); i < n; ++i)
        r.push_back({std::string(1, static_cast<char>('a' + pick(rng, 0, 2))), coin(rng)});
    // Drop literals that would put both a and a~ into one tensor.
    std::vector<IllLiteral> ok;
    for (const auto& l : r)
        if (std::none_of(ok.begin(), ok.end(), [&](const IllLiteral& o) { return o.atom == l.atom && o.negative != l.negative; }))
            ok.push_back(l);
    return ok;
}

IllClause random_ill_clause(Rng& rng)
{
    IllClause c;
    if (coin(rng, 0.6)) {
        c.conclusions = random_literals(rng, 3);
        return c;
    }
    c.kind = IllKind::HornImpl;
    c.premises = {std::string(1, static_cast<char>('a' + pick(rng, 0, 2)))};
    for (const auto& l : random_literals(rng, 2))
        if (l.atom != c.premises[0])
            c.conclusions.push_back(l);
    if (c.conclusions.empty())
        c.conclusions.push_back({c.premises[0] == "a" ? "b" : "a", false});
    return c;
}

/// Some accepted trace of the acyclic translation has only matches and
/// offers whose names are exactly Z.
bool oracle_honoured(const ContractAutomaton& a, const std::vector<IllLiteral>& z)
{
    std::multiset<std::string> want;
    for (const auto& l : z)
        want.insert(l.atom);
    for (const auto& w : enumerate_traces(a, a.transitions().size())) {
        std::multiset<std::string> offers;
        bool ok = true;
        for (const auto& l : w) {
            if (l.is_request())
                ok = false;
            else if (l.is_offer())
                offers.insert(l.name());
        }
        if (ok && offers == want)
            return true;
    }
    return false;
}

const char* example_pcl = "b -> a /\\ a & c -->> b /\\ c";
const char* example_ill = "b -o a, a~ * c~ * b, c";

}  // namespace

TEST_SUITE("logic")
{
    TEST_CASE("formula validation")
    {
        CHECK_THROWS_AS(translate_pcl(PclFormula{{{PclKind::Conj, {"a"}, ""}}}), Error);
        CHECK_THROWS_AS(translate_pcl(PclFormula{{{PclKind::Conj, {"a", "a"}, ""}, {PclKind::Conj, {"b"}, ""}}}), Error);
        CHECK_THROWS_AS(translate_pcl(PclFormula{{{PclKind::Impl, {"a"}, "a"}, {PclKind::Conj, {"b"}, ""}}}), Error);
        CHECK_THROWS_AS(validate(IllClause{IllKind::Tensor, {}, {{"a", false}, {"a", true}}}), Error);
        CHECK_THROWS_AS(validate(IllClause{IllKind::HornImpl, {"b"}, {{"b", false}}}), Error);
        CHECK_THROWS_AS(validate(IllFormula{{IllClause{IllKind::Tensor, {}, {{"a", false}}}}}), Error);
        CHECK(lambda(parse_pcl(example_pcl)) == std::vector<std::string>{"a", "b", "c"});
    }

    TEST_CASE("translation of the three-party PCL example")
    {
        auto p = parse_pcl(example_pcl);
        auto a = translate_pcl(p);
        CHECK(a.rank() == 3);
        CHECK(is_deterministic(a));
        auto b_impl = translate_pcl_clause(p.clauses[0]);
        CHECK(b_impl.num_states() == 2);
        auto ac_cimpl = translate_pcl_clause(p.clauses[1]);
        CHECK(ac_cimpl.num_states() == 4);
        std::size_t loops = 0;
        for (const auto& t : ac_cimpl.transitions())
            loops += t.label.is_offer() && t.source == t.target;
        CHECK(loops == 4);
        auto r = pcl_entails_lambda(p);
        CHECK(r.holds);
        REQUIRE(r.witness);
        CHECK(accepts(a, *r.witness));
        CHECK(in_agreement(*r.witness));
    }

    TEST_CASE("entailment examples")
    {
        auto cyc = parse_pcl("b -> a /\\ a -> b");
        CHECK_FALSE(pcl_entails_lambda(cyc).holds);
        CHECK(admits_weak_agreement(translate_pcl(cyc)).answer);
        CHECK_THROWS_AS(pcl_weak_entails(cyc), Error);
        CHECK(pcl_entails_lambda(parse_pcl("a /\\ b")).holds);
        CHECK(pcl_weak_entails(parse_pcl("b -->> a /\\ a -->> b")).holds);
        CHECK(pcl_entails_lambda(parse_pcl("b -->> a /\\ a -->> b")).holds);
        CHECK(pcl_weak_entails(parse_pcl("a & b /\\ c")).holds);
    }

    TEST_CASE("structure of PCL translations")
    {
        Rng rng(51);
        for (int round = 0; round < 150; ++round) {
            auto p = random_pcl(rng);
            auto a = translate_pcl(p);
            CHECK(is_deterministic(a));
            REQUIRE(a.finals().size() == 1);
            auto f = a.finals()[0];
            for (const auto& s : a.state(f))
                CHECK(s == "{*}");
            for (const auto& t : a.outgoing(f)) {
                CHECK(t.target == f);
                CHECK_FALSE(t.label.is_request());
            }
            auto reach = reachable_states(a);
            for (std::size_t q = 0; q < a.num_states(); ++q) {
                if (!reach[q])
                    continue;
                std::set<std::pair<std::size_t, std::size_t>> consumed;
                for (const auto& t : a.outgoing(q))
                    for (auto i : t.label.active()) {
                        if (!t.label[i].is_request())
                            continue;
                        auto before = pending(a.state(q)[i]), after = pending(a.state(t.target)[i]);
                        REQUIRE(before.size() == after.size() + 1);
                        std::size_t k = 0;
                        for (auto j : before)
                            if (!after.count(j))
                                k = j;
                        CHECK(p.clauses[i].atoms[k - 1] == t.label[i].name);
                        consumed.insert({i, k});
                    }
                std::set<std::pair<std::size_t, std::size_t>> want;
                for (std::size_t i = 0; i < a.rank(); ++i)
                    for (auto j : pending(a.state(q)[i]))
                        want.insert({i, j});
                CHECK(consumed == want);
            }
            auto strong = admits_agreement(a);
            CHECK(pcl_entails_lambda(p).holds == strong);
            // The flow decider is exercised at desk scale only.
            if (strong && a.num_states() <= 12)
                CHECK(admits_weak_agreement(a).answer);
        }
    }

    TEST_CASE("residual formulae")
    {
        Rng rng(52);
        std::vector<PclFormula> formulas{parse_pcl(example_pcl)};
        for (int i = 0; i < 40; ++i)
            formulas.push_back(random_pcl(rng));
        for (const auto& p : formulas) {
            auto a = translate_pcl(p);
            for (const auto& t : a.outgoing(a.initial())) {
                if (t.label.is_request())
                    continue;
                auto rest = restarted(a, t.target);
                auto res = translate_pcl(pcl_residual(p, t.label));
                CHECK(trace_strings(enumerate_traces(rest, 5)) == trace_strings(enumerate_traces(res, 5)));
            }
        }
    }

    TEST_CASE("ILL example with three principals")
    {
        auto g = parse_ill_context(example_ill);
        auto a = translate_ill(g);
        CHECK(a.rank() == 3);
        auto r = ill_honoured(g, {});
        CHECK(r.holds);
        REQUIRE(r.witness);
        CHECK(r.witness->size() == 3);
        for (const auto& l : *r.witness)
            CHECK(l.is_match());
        auto alice = translate_ill_clause(std::get<IllClause>(g[0]));
        CHECK(isomorphic(alice, parse_principal("?b.!a")));
    }

    TEST_CASE("ILL base cases")
    {
        CHECK(ill_honoured(parse_ill_context("(a) * (a~)"), {}).holds);
        CHECK_FALSE(ill_honoured(parse_ill_context("a~ * b"), parse_ill_literals("b")).holds);
        CHECK(ill_honoured(parse_ill_context("a * b, b~"), parse_ill_literals("a")).holds);
        CHECK_FALSE(ill_honoured(parse_ill_context("a * b, b~"), {}).holds);
        CHECK_THROWS_AS(ill_honoured(parse_ill_context("a"), parse_ill_literals("a~")), Error);
        auto single = translate_ill_tensor({{"a", false}});
        CHECK(single.num_states() == 2);
        REQUIRE(single.transitions().size() == 1);
        CHECK(single.transitions()[0].label.is_offer());
        auto twice = translate_ill_tensor({{"a", false}, {"a", false}});
        CHECK(enumerate_traces(twice, 3).size() == 1);
        CHECK(enumerate_traces(twice, 3)[0].size() == 2);
    }

    TEST_CASE("Horn implications are layered")
    {
        IllClause c{IllKind::HornImpl, {"a", "b"}, {{"c", false}, {"d", true}}};
        auto a = translate_ill_clause(c);
        CHECK_FALSE(a.has_cycle());
        CHECK(is_deterministic(a));
        auto ws = enumerate_traces(a, 10);
        CHECK(ws.size() == 4);
        for (const auto& w : ws) {
            CHECK(w.size() == 4);
            CHECK(w[0].is_request());
            CHECK(w[1].is_request());
        }
    }

    TEST_CASE("ILL decisions match exhaustive enumeration and are order invariant")
    {
        Rng rng(53);
        for (int round = 0; round < 120; ++round) {
            IllContext g;
            for (std::size_t i = 0, n = pick(rng, 1, 3); i < n; ++i)
                g.push_back(random_ill_clause(rng));
            std::vector<IllLiteral> z;
            if (coin(rng, 0.3))
                z.push_back({"a", false});
            auto got = ill_honoured(g, z);
            CHECK(got.holds == oracle_honoured(translate_ill(g), z));
            auto perm = g;
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(ill_honoured(perm, z).holds == got.holds);
            if (g.size() >= 2) {
                IllFormula f;
                for (const auto& e : g)
                    f.clauses.push_back(std::get<IllClause>(e));
                CHECK(ill_honoured(IllContext{f}, z).holds == got.holds);
            }
            if (got.holds) {
                REQUIRE(got.witness);
                CHECK(accepts(translate_ill(g), *got.witness));
            }
        }
    }
}
