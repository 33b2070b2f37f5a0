#include "cak/error.hpp"
#include "cak/milp.hpp"

#include <doctest.h>

#include <random>

using namespace cak;

namespace {

using Rng = std::mt19937_64;

int rnd(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Relation random_relation(Rng& rng)
{
    switch (rnd(rng, 0, 2)) {
    case 0: return Relation::LessEq;
    case 1: return Relation::GreaterEq;
    default: return Relation::Equal;
    }
}

MilpModel random_box_model(Rng& rng, std::size_t vars, VarKind kind, int box)
{
    MilpModel m;
    for (std::size_t i = 0; i < vars; ++i) {
        bool binary = kind == VarKind::Integer && rnd(rng, 0, 5) == 0;
        m.add_variable("v" + std::to_string(i), binary ? VarKind::Binary : kind, Rational(0),
                       binary ? std::optional<Rational>{} : std::optional<Rational>{Rational(rnd(rng, 1, box))});
    }
    auto rows = rnd(rng, 1, 3);
    for (int r = 0; r < rows; ++r) {
        LinearTerms terms;
        for (std::size_t i = 0; i < vars; ++i)
            if (auto c = rnd(rng, -3, 3))
                terms.push_back({i, Rational(c)});
        auto rel = random_relation(rng);
        if (rel == Relation::Equal && rnd(rng, 0, 1))
            rel = Relation::LessEq;
        m.add_constraint(std::move(terms), rel, Rational(rnd(rng, -2, 8), rnd(rng, 1, 2)));
    }
    LinearTerms obj;
    for (std::size_t i = 0; i < vars; ++i)
        obj.push_back({i, Rational(rnd(rng, -3, 3))});
    m.set_objective(rnd(rng, 0, 1) ? Sense::Maximize : Sense::Minimize, obj);
    return m;
}

/// Exhaustive search over the integer box.
std::optional<Rational> brute_force(const MilpModel& m)
{
    std::vector<Rational> x(m.variables().size(), Rational(0));
    std::vector<int> hi;
    for (const auto& v : m.variables())
        hi.push_back(static_cast<int>(v.upper->get_num().get_si()));
    std::optional<Rational> best;
    while (true) {
        if (m.satisfies(x)) {
            auto val = m.evaluate(x);
            if (!best || (m.sense() == Sense::Maximize ? val > *best : val < *best))
                best = val;
        }
        std::size_t k = 0;
        while (k < x.size() && x[k] == hi[k])
            x[k++] = 0;
        if (k == x.size())
            break;
        x[k] += 1;
    }
    return best;
}

/// Two-variable LP by enumerating intersections of constraint and bound lines.
std::optional<Rational> vertex_enumeration(const MilpModel& m)
{
    struct Line {
        Rational a, b, c;  // a·x + b·y = c
    };
    std::vector<Line> lines;
    for (const auto& row : m.constraints()) {
        Line l{0, 0, row.rhs};
        for (const auto& [i, c] : row.terms)
            (i == 0 ? l.a : l.b) += c;
        lines.push_back(l);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& v = m.variables()[i];
        Rational one(1), zero(0);
        if (v.lower)
            lines.push_back(i == 0 ? Line{one, zero, *v.lower} : Line{zero, one, *v.lower});
        if (v.upper)
            lines.push_back(i == 0 ? Line{one, zero, *v.upper} : Line{zero, one, *v.upper});
    }
    std::optional<Rational> best;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            Rational det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
            if (det == 0)
                continue;
            Rational x = (lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det;
            Rational y = (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det;
            std::vector<Rational> p{x, y};
            if (!m.satisfies(p))
                continue;
            auto val = m.evaluate(p);
            if (!best || (m.sense() == Sense::Maximize ? val > *best : val < *best))
                best = val;
        }
    return best;
}

}  // namespace

TEST_SUITE("milp")
{
    TEST_CASE("rational helpers")
    {
        CHECK(to_string(Rational(5, 2)) == "5/2");
        CHECK(to_string(Rational(-3)) == "-3");
        CHECK(to_decimal(Rational(-1, 3), 4) == "-0.3333");
        CHECK(to_decimal(Rational(2, 3), 2) == "0.67");
        CHECK(parse_rational("-7/14") == Rational(-1, 2));
        CHECK_THROWS_AS(parse_rational("1/0"), Error);
        CHECK_THROWS_AS(parse_rational("x"), Error);
        CHECK(cak::floor(Rational(-5, 2)) == -3);
        CHECK(cak::ceil(Rational(-5, 2)) == -2);
    }

    TEST_CASE("small linear programs")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Continuous);
        m.add_constraint({{x, 1}}, Relation::LessEq, 3);
        m.set_objective(Sense::Maximize, {{x, 1}});
        auto r = solve_lp(m);
        CHECK(r.status == MilpStatus::Optimal);
        CHECK(r.value == 3);

        MilpModel m2;
        auto a = m2.add_variable("x", VarKind::Continuous);
        auto b = m2.add_variable("y", VarKind::Continuous);
        m2.add_constraint({{a, 1}, {b, 1}}, Relation::LessEq, Rational(5, 2));
        m2.set_objective(Sense::Maximize, {{a, 1}, {b, 1}});
        auto r2 = solve_lp(m2);
        CHECK(r2.status == MilpStatus::Optimal);
        CHECK(r2.value == Rational(5, 2));
        CHECK(m2.satisfies(r2.assignment));
    }

    TEST_CASE("infeasible, unbounded and malformed models")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Integer);
        m.add_constraint({{x, 2}}, Relation::Equal, 1);
        m.set_objective(Sense::Minimize, {{x, 1}});
        CHECK(solve_lp(m).status == MilpStatus::Optimal);
        CHECK(solve_milp(m).status == MilpStatus::Infeasible);

        MilpModel u;
        auto y = u.add_variable("y", VarKind::Continuous, std::nullopt);
        u.set_objective(Sense::Minimize, {{y, 1}});
        CHECK(solve_lp(u).status == MilpStatus::Unbounded);

        MilpModel bad;
        bad.add_variable("z", VarKind::Continuous);
        bad.add_constraint({{3, 1}}, Relation::LessEq, 1);
        CHECK_THROWS_AS(solve_lp(bad), Error);
        MilpModel bounds;
        bounds.add_variable("w", VarKind::Continuous, Rational(2), Rational(1));
        CHECK_THROWS_AS(bounds.validate(), Error);
    }

    TEST_CASE("branch and bound")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Integer);
        m.add_constraint({{x, 1}}, Relation::LessEq, Rational(7, 2));
        m.set_objective(Sense::Maximize, {{x, 1}});
        auto r = solve_milp(m);
        CHECK(r.status == MilpStatus::Optimal);
        CHECK(r.value == 3);

        // A model that needs branching exhausts a one-node budget.
        MilpModel k;
        auto a = k.add_variable("a", VarKind::Integer);
        auto b = k.add_variable("b", VarKind::Integer);
        k.add_constraint({{a, 2}, {b, 2}}, Relation::LessEq, 3);
        k.set_objective(Sense::Maximize, {{a, 3}, {b, 2}});
        CHECK(solve_milp(k, MilpOptions{1}).status == MilpStatus::CapExceeded);
        auto full = solve_milp(k);
        CHECK(full.status == MilpStatus::Optimal);
        CHECK(full.value == 3);
    }

    TEST_CASE("binary variables are bounded")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Binary);
        m.set_objective(Sense::Maximize, {{x, 5}});
        auto r = solve_milp(m);
        CHECK(r.value == 5);
        CHECK(r.assignment[x] == 1);
    }

    TEST_CASE("branch and bound matches exhaustive search")
    {
        Rng rng(31);
        int optimal = 0;
        for (int round = 0; round < 250; ++round) {
            auto m = random_box_model(rng, static_cast<std::size_t>(rnd(rng, 2, 4)), VarKind::Integer, 4);
            auto want = brute_force(m);
            auto got = solve_milp(m);
            if (!want) {
                CHECK(got.status == MilpStatus::Infeasible);
                continue;
            }
            ++optimal;
            REQUIRE(got.status == MilpStatus::Optimal);
            CHECK(got.value == *want);
            CHECK(m.satisfies(got.assignment));
            CHECK(m.evaluate(got.assignment) == got.value);
        }
        CHECK(optimal >= 120);
    }

    TEST_CASE("simplex matches vertex enumeration in the plane")
    {
        Rng rng(32);
        for (int round = 0; round < 200; ++round) {
            auto m = random_box_model(rng, 2, VarKind::Continuous, 5);
            auto want = vertex_enumeration(m);
            auto got = solve_lp(m);
            if (!want) {
                CHECK(got.status == MilpStatus::Infeasible);
                continue;
            }
            REQUIRE(got.status == MilpStatus::Optimal);
            CHECK(got.value == *want);
            CHECK(m.satisfies(got.assignment));
        }
    }

    TEST_CASE("dual bound equals the primal optimum")
    {
        Rng rng(33);
        int checked = 0;
        for (int round = 0; round < 200; ++round) {
            auto m = random_box_model(rng, static_cast<std::size_t>(rnd(rng, 2, 5)), VarKind::Continuous, 6);
            auto primal = solve_lp(m);
            if (primal.status != MilpStatus::Optimal)
                continue;
            auto dual = detail::lp_dual_certificate(m);
            REQUIRE(dual.available);
            CHECK(dual.dual_feasible);
            CHECK(dual.dual_value == primal.value);
            ++checked;
        }
        CHECK(checked >= 100);
    }

    TEST_CASE("free and negative-bounded variables")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Integer, std::nullopt, Rational(5, 2));
        auto y = m.add_variable("y", VarKind::Continuous, Rational(-3), std::nullopt);
        m.add_constraint({{x, 1}, {y, -1}}, Relation::GreaterEq, Rational(-1, 2));
        m.set_objective(Sense::Maximize, {{x, 1}, {y, 1}});
        auto r = solve_milp(m);
        CHECK(r.status == MilpStatus::Optimal);
        CHECK(r.value == Rational(9, 2));
        CHECK(r.assignment[x] == 2);
        CHECK(r.assignment[y] == Rational(5, 2));
    }

    TEST_CASE("plain-text dump")
    {
        MilpModel m;
        auto x = m.add_variable("x", VarKind::Integer);
        m.add_constraint({{x, Rational(1, 3)}}, Relation::LessEq, Rational(7, 2), "cap");
        m.set_objective(Sense::Maximize, {{x, 1}});
        auto text = m.to_lp_text();
        CHECK(text.find("1/3") != std::string::npos);
        CHECK(text.find("7/2") != std::string::npos);
        CHECK(text.find("cap") != std::string::npos);
    }
}
