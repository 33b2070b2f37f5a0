#include "support.hpp"

#include "cak/error.hpp"

#include <doctest.h>

using namespace cak;
using namespace cak_test;

namespace {

ActionVector lbl(std::vector<std::string> entries)
{
    std::vector<BasicAction> e;
    for (const auto& s : entries)
        e.push_back(BasicAction::parse(s));
    return ActionVector(std::move(e));
}

const std::vector<std::string> pool{"a", "b", "c"};

}  // namespace

TEST_SUITE("core")
{
    TEST_CASE("complementary labels")
    {
        CHECK(complementary(lbl({"?sig"}), lbl({"!sig"})));
        CHECK_FALSE(complementary(lbl({"!res"}), lbl({"!res"})));
        CHECK_FALSE(complementary(lbl({"?sig", "!sig"}), lbl({"?sig"})));
        CHECK(complementary(lbl({"-", "!x"}), lbl({"?x", "-", "-"})));
    }

    TEST_CASE("action vectors are classified or rejected")
    {
        CHECK(lbl({"-", "?a"}).is_request());
        CHECK(lbl({"!a", "-"}).is_offer());
        CHECK(lbl({"?a", "!a"}).is_match());
        CHECK_THROWS_AS(lbl({"-", "-"}), Error);
        CHECK_THROWS_AS(lbl({"?a", "!b"}), Error);
        CHECK_THROWS_AS(lbl({"!a", "!a"}), Error);
        CHECK_THROWS_AS(lbl({"?a", "!a", "!a"}), Error);
        CHECK_THROWS_AS(BasicAction::parse("?__done"), Error);
    }

    TEST_CASE("observable")
    {
        auto w = parse_trace({{"!res", "-"}, {"?sig", "!sig"}});
        auto o = observable(w);
        REQUIRE(o.size() == 2);
        CHECK(o[0] == Observation{Observation::Kind::Offer, "res"});
        CHECK(o[1].kind == Observation::Kind::Tau);
        CHECK(observable({}).empty());
        auto v = observable(parse_trace({{"?sig", "!sig"}, {"-", "?res"}}));
        CHECK(v[0].kind == Observation::Kind::Tau);
        CHECK(v[1] == Observation{Observation::Kind::Request, "res"});
        CHECK_THROWS_AS(trace_rank(parse_trace({{"!a"}, {"!a", "-"}})), Error);
    }

    TEST_CASE("product of the two principals of the introductory example")
    {
        auto a3 = product(fixture("intro_a1.json"), fixture("intro_a2.json"));
        CHECK(a3.rank() == 2);
        CHECK(a3.num_states() == 4);
        CHECK(isomorphic(a3, fixture("intro_product.json")));
        auto init = a3.initial();
        for (const auto& t : a3.outgoing(init))
            CHECK(t.label != lbl({"?sig", "-"}));
        CHECK_THROWS_AS(product(std::span<const ContractAutomaton>{}), Error);
    }

    TEST_CASE("product of one component is the identity")
    {
        auto p = fixture("bart.json");
        std::vector<ContractAutomaton> one{p};
        CHECK(product(one) == p);
    }

    TEST_CASE("product is not associative, a-product is")
    {
        auto bill = fixture("bill.cak"), mary = fixture("mary.cak"), john = fixture("john.cak");
        auto left = product(product(bill, mary), john);
        auto right = product(bill, product(mary, john));
        CHECK(isomorphic(left, fixture("bmj_left.json")));
        CHECK(isomorphic(right, fixture("bmj_right.json")));
        CHECK_FALSE(isomorphic(left, right));
        auto al = a_product(a_product(bill, mary), john);
        auto ar = a_product(bill, a_product(mary, john));
        CHECK(isomorphic(al, fixture("bmj_aproduct.json")));
        CHECK(isomorphic(al, ar));
        CHECK(a_product(bill, mary) == product(bill, mary));
    }

    TEST_CASE("projection inverts the product")
    {
        auto a3 = fixture("intro_product.json");
        CHECK(isomorphic(projection(a3, 0), fixture("intro_a1.json")));
        CHECK(isomorphic(projection(a3, 1), fixture("intro_a2.json")));
        CHECK_THROWS_AS(projection(a3, 2), Error);
        auto p = fixture("bart.json");
        CHECK(isomorphic(projection(p, 0), p));
    }

    TEST_CASE("product agrees with a direct reading of its definition")
    {
        Rng rng(11);
        for (int round = 0; round < 150; ++round) {
            std::vector<ContractAutomaton> comps;
            auto n = pick(rng, 2, 3);
            for (std::size_t i = 0; i < n; ++i)
                comps.push_back(random_principal(rng, 3, pool, 2, "s" + std::to_string(i) + "_"));
            if (n == 3 && coin(rng)) {
                // A composite operand exercises matches inside components.
                std::vector<ContractAutomaton> nested{product(comps[0], comps[1]), comps[2]};
                CHECK(edge_set(product(nested)) == oracle_product_edges(nested));
            }
            auto p = product(comps);
            CHECK(edge_set(p) == oracle_product_edges(comps));
            for (const auto& t : p.transitions())
                CHECK_NOTHROW(ActionVector(t.label.entries()));
            for (std::size_t i = 0; i < n; ++i)
                CHECK(isomorphic(projection(p, i), comps[i]));
        }
    }

    TEST_CASE("a-product is associative on random triples")
    {
        Rng rng(12);
        for (int round = 0; round < 120; ++round) {
            auto a = random_principal(rng, 3, pool, 2, "x");
            auto b = random_principal(rng, 3, pool, 2, "y");
            auto c = random_principal(rng, 3, pool, 2, "z");
            CHECK(isomorphic(a_product(a_product(a, b), c), a_product(a, a_product(b, c))));
        }
    }

    TEST_CASE("accepts")
    {
        auto a3 = fixture("intro_product.json");
        CHECK(accepts(a3, parse_trace({{"!res", "-"}, {"?sig", "!sig"}})));
        CHECK_FALSE(accepts(a3, {}));
        CHECK_THROWS_AS(accepts(a3, parse_trace({{"!res"}})), Error);
        ContractAutomaton single(1, {{"q"}}, 0, {0}, {});
        CHECK(accepts(single, {}));
    }

    TEST_CASE("enumerate_traces")
    {
        auto a3 = fixture("intro_product.json");
        auto one = enumerate_traces(a3, 1);
        REQUIRE(one.size() == 1);
        CHECK(one[0] == parse_trace({{"?sig", "!sig"}}));
        CHECK(enumerate_traces(a3, 0).empty());
        ContractAutomaton single(1, {{"q"}}, 0, {0}, {});
        CHECK(enumerate_traces(single, 0) == std::vector<Trace>{Trace{}});
        auto ab = product(fixture("alice.cak"), fixture("bob.cak"));
        CHECK(enumerate_traces(ab, 3).size() == 2);
        CHECK(enumerate_traces(ab, 10).size() == 2);
    }

    TEST_CASE("accepts and enumerate_traces agree with subset simulation")
    {
        Rng rng(13);
        for (int round = 0; round < 60; ++round) {
            auto a = round % 2 ? random_principal(rng, 5, {"a", "b"}, 2)
                               : product(random_principal(rng, 2, {"a", "b"}), random_principal(rng, 2, {"a", "c"}, 2, "r"));
            auto labels = distinct_labels(a);
            std::size_t len = labels.size() > 4 ? 5 : 6;
            auto listed = trace_strings(enumerate_traces(a, len));
            std::size_t accepted = 0;
            for_each_word(labels, len, [&](const Trace& w) {
                bool acc = oracle_accepts(a, w);
                CHECK(acc == accepts(a, w));
                CHECK(acc == (listed.count(to_string(w)) == 1));
                accepted += acc;
            });
            CHECK(accepted == listed.size());
        }
    }

    TEST_CASE("enumeration order is deterministic")
    {
        auto p = fixture("bart.json");
        CHECK(enumerate_traces(p, 8) == enumerate_traces(p, 8));
    }

    TEST_CASE("trim and prune preserve the language")
    {
        Rng rng(14);
        for (int round = 0; round < 40; ++round) {
            auto a = product(random_principal(rng, 3, pool), random_principal(rng, 3, pool, 2, "r"));
            auto want = trace_strings(enumerate_traces(a, 5));
            CHECK(trace_strings(enumerate_traces(trim(a), 5)) == want);
            CHECK(trace_strings(enumerate_traces(prune(a), 5)) == want);
            auto r = reachable_states(trim(a));
            CHECK(std::all_of(r.begin(), r.end(), [](bool b) { return b; }));
        }
    }

    TEST_CASE("concatenation")
    {
        ContractAutomaton eps(1, {{"e"}}, 0, {0}, {});
        auto p = fixture("bart.json");
        CHECK(isomorphic(concatenate(eps, p), p));
        auto alice = concatenate(parse_principal("?b"), parse_principal("!a"));
        CHECK(isomorphic(alice, parse_principal("?b.!a")));
        CHECK_THROWS_AS(concatenate(fixture("intro_product.json"), p), Error);
        CHECK_THROWS_AS(concatenate(parse_principal("(!a)*"), p), Error);
    }

    TEST_CASE("concatenation concatenates languages")
    {
        Rng rng(15);
        for (int round = 0; round < 80; ++round) {
            auto a = random_acyclic_principal(rng, 4, {"a", "b"}, "l");
            auto b = random_acyclic_principal(rng, 4, {"b", "c"}, "r");
            std::set<std::string> want;
            for (const auto& u : enumerate_traces(a, 4))
                for (const auto& v : enumerate_traces(b, 4)) {
                    Trace w = u;
                    w.insert(w.end(), v.begin(), v.end());
                    want.insert(to_string(w));
                }
            CHECK(trace_strings(enumerate_traces(concatenate(a, b), 8)) == want);
        }
    }

    TEST_CASE("determinization preserves the language")
    {
        Rng rng(16);
        for (int round = 0; round < 60; ++round) {
            auto a = random_principal(rng, 4, pool, 3);
            auto d = determinize(a);
            CHECK(is_deterministic(d));
            CHECK(trace_strings(enumerate_traces(d, 5)) == trace_strings(enumerate_traces(a, 5)));
        }
        CHECK_THROWS_AS(determinize(fixture("intro_product.json")), Error);
    }

    TEST_CASE("isomorphism ignores state names only")
    {
        auto p = fixture("bart.json");
        std::vector<StateVector> renamed;
        for (const auto& s : p.states())
            renamed.push_back({"z" + s[0]});
        ContractAutomaton q(1, renamed, p.initial(), p.finals(), p.transitions());
        CHECK(isomorphic(p, q));
        CHECK(canonical_form(p) == canonical_form(q));
        auto ts = p.transitions();
        ts[0].label = ActionVector({BasicAction::offer("other")});
        ContractAutomaton r(1, p.states(), p.initial(), p.finals(), ts);
        CHECK_FALSE(isomorphic(p, r));
        ContractAutomaton f(1, p.states(), p.initial(), {p.initial()}, p.transitions());
        CHECK_FALSE(isomorphic(p, f));
    }

    TEST_CASE("automaton validation")
    {
        CHECK_THROWS_AS(ContractAutomaton(2, {{"a", "b"}, {"c", "d"}}, 0, {1}, {{0, lbl({"!x", "-"}), 1}}), Error);
        CHECK_THROWS_AS(ContractAutomaton(1, {{"a"}}, 0, {}, {{0, lbl({"!x"}), 0}, {0, lbl({"?x"}), 0}}), Error);
        CHECK_THROWS_AS(ContractAutomaton(1, {{"a"}}, 3, {}, {}), Error);
        CHECK_NOTHROW(ContractAutomaton(2, {{"a", "b"}, {"c", "b"}}, 0, {1}, {{0, lbl({"!x", "-"}), 1}}));
    }
}
