#include "cak/dsl.hpp"

#include "cak/compose.hpp"
#include "cak/error.hpp"

#include <cctype>
#include <deque>
#include <map>
#include <set>

namespace cak {

namespace {

[[noreturn]] void syntax(const std::string& m, std::size_t pos)
{
    throw Error(ErrorKind::SyntaxError, m + " at position " + std::to_string(pos), pos);
}

class Cursor {
public:
    explicit Cursor(std::string_view text) : s_(text) {}

    void skip()
    {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_])))
            ++p_;
    }
    bool at_end()
    {
        skip();
        return p_ >= s_.size();
    }
    bool peek(std::string_view tok)
    {
        skip();
        return s_.substr(p_, tok.size()) == tok;
    }
    bool accept(std::string_view tok)
    {
        if (!peek(tok))
            return false;
        p_ += tok.size();
        return true;
    }
    void expect(std::string_view tok)
    {
        if (!accept(tok))
            syntax("expected '" + std::string(tok) + "'", p_);
    }
    std::string name()
    {
        skip();
        std::size_t start = p_;
        while (p_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[p_])) || s_[p_] == '_'))
            ++p_;
        std::string n(s_.substr(start, p_ - start));
        if (!is_valid_action_name(n))
            syntax("expected an action name", start);
        if (n == done_action)
            syntax("the name '" + n + "' is reserved", start);
        return n;
    }
    std::size_t pos() const { return p_; }

private:
    std::string_view s_;
    std::size_t p_ = 0;
};

// ------------------------------------------------------------ principal DSL

PrincipalExpr parse_choice(Cursor& c);

PrincipalExpr parse_primary(Cursor& c)
{
    if (c.accept("(")) {
        if (c.peek(")"))
            syntax("empty parentheses", c.pos());
        auto e = parse_choice(c);
        c.expect(")");
        return e;
    }
    PrincipalExpr e;
    if (c.accept("?"))
        e.action = BasicAction::request(c.name());
    else if (c.accept("!"))
        e.action = BasicAction::offer(c.name());
    else
        syntax(c.at_end() ? "unexpected end of input" : "expected '?', '!' or '('", c.pos());
    return e;
}

PrincipalExpr parse_factor(Cursor& c)
{
    auto e = parse_primary(c);
    while (c.accept("*")) {
        PrincipalExpr s;
        s.kind = PrincipalExpr::Kind::Star;
        s.children.push_back(std::move(e));
        e = std::move(s);
    }
    return e;
}

PrincipalExpr parse_term(Cursor& c)
{
    auto first = parse_factor(c);
    if (!c.peek("."))
        return first;
    PrincipalExpr e;
    e.kind = PrincipalExpr::Kind::Concat;
    e.children.push_back(std::move(first));
    while (c.accept("."))
        e.children.push_back(parse_factor(c));
    return e;
}

PrincipalExpr parse_choice(Cursor& c)
{
    auto first = parse_term(c);
    if (!c.peek("+"))
        return first;
    PrincipalExpr e;
    e.kind = PrincipalExpr::Kind::Choice;
    e.children.push_back(std::move(first));
    while (c.accept("+"))
        e.children.push_back(parse_term(c));
    return e;
}

struct NfaEdge {
    bool epsilon = true;
    BasicAction label;
    std::size_t to = 0;
};

struct Nfa {
    std::vector<std::vector<NfaEdge>> edges;
    std::size_t add()
    {
        edges.emplace_back();
        return edges.size() - 1;
    }
    void link(std::size_t a, std::size_t b) { edges[a].push_back({true, BasicAction::idle(), b}); }
    void link(std::size_t a, const BasicAction& l, std::size_t b) { edges[a].push_back({false, l, b}); }
};

/// Thompson fragment: returns (entry, exit).
std::pair<std::size_t, std::size_t> thompson(Nfa& n, const PrincipalExpr& e)
{
    using K = PrincipalExpr::Kind;
    switch (e.kind) {
    case K::Atom: {
        auto a = n.add(), b = n.add();
        n.link(a, e.action, b);
        return {a, b};
    }
    case K::Concat: {
        auto [in, out] = thompson(n, e.children.front());
        for (std::size_t k = 1; k < e.children.size(); ++k) {
            auto [i2, o2] = thompson(n, e.children[k]);
            n.link(out, i2);
            out = o2;
        }
        return {in, out};
    }
    case K::Choice: {
        auto a = n.add(), b = n.add();
        for (const auto& ch : e.children) {
            auto [i, o] = thompson(n, ch);
            n.link(a, i);
            n.link(o, b);
        }
        return {a, b};
    }
    case K::Star: {
        auto a = n.add(), b = n.add();
        auto [i, o] = thompson(n, e.children.front());
        n.link(a, i);
        n.link(a, b);
        n.link(o, i);
        n.link(o, b);
        return {a, b};
    }
    }
    return {0, 0};
}

std::string print_child(const PrincipalExpr& parent, const PrincipalExpr& child)
{
    using K = PrincipalExpr::Kind;
    bool paren = false;
    switch (parent.kind) {
    case K::Star: paren = child.kind != K::Atom && child.kind != K::Star; break;
    case K::Concat: paren = child.kind == K::Concat || child.kind == K::Choice; break;
    case K::Choice: paren = child.kind == K::Choice; break;
    case K::Atom: break;
    }
    auto s = print(child);
    return paren ? "(" + s + ")" : s;
}

}  // namespace

PrincipalExpr parse_principal_expr(std::string_view text)
{
    Cursor c(text);
    if (c.at_end())
        syntax("empty expression", 0);
    auto e = parse_choice(c);
    if (!c.at_end())
        syntax("unexpected character", c.pos());
    return e;
}

std::string print(const PrincipalExpr& e)
{
    using K = PrincipalExpr::Kind;
    switch (e.kind) {
    case K::Atom: return e.action.to_string();
    case K::Star: return print_child(e, e.children.front()) + "*";
    case K::Concat:
    case K::Choice: {
        std::string s;
        for (std::size_t k = 0; k < e.children.size(); ++k) {
            if (k)
                s += e.kind == K::Concat ? "." : " + ";
            s += print_child(e, e.children[k]);
        }
        return s;
    }
    }
    return {};
}

ContractAutomaton compile_principal(const PrincipalExpr& e, const std::string& principal_name)
{
    Nfa n;
    auto [start, accept] = thompson(n, e);
    const std::size_t size = n.edges.size();
    std::vector<std::set<std::size_t>> closure(size);
    for (std::size_t q = 0; q < size; ++q) {
        std::deque<std::size_t> work{q};
        closure[q].insert(q);
        while (!work.empty()) {
            auto p = work.front();
            work.pop_front();
            for (const auto& e : n.edges[p])
                if (e.epsilon && closure[q].insert(e.to).second)
                    work.push_back(e.to);
        }
    }
    // Only the start state and targets of labelled edges survive ε-elimination.
    std::map<std::size_t, std::size_t> id;
    std::deque<std::size_t> order{start};
    id[start] = 0;
    std::vector<Transition> ts;
    std::vector<std::size_t> finals;
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto q = order[k];
        if (closure[q].count(accept))
            finals.push_back(k);
        for (auto p : closure[q])
            for (const auto& e : n.edges[p]) {
                if (e.epsilon)
                    continue;
                auto [it, fresh] = id.emplace(e.to, order.size());
                if (fresh)
                    order.push_back(e.to);
                ts.push_back({k, ActionVector({e.label}), it->second});
            }
    }
    std::vector<StateVector> states;
    for (std::size_t k = 0; k < order.size(); ++k)
        states.push_back({"s" + std::to_string(k)});
    std::vector<std::string> names;
    if (!principal_name.empty())
        names.push_back(principal_name);
    ContractAutomaton a(1, std::move(states), 0, std::move(finals), std::move(ts), std::nullopt, names);
    return prune(a);
}

ContractAutomaton parse_principal(std::string_view text, const std::string& principal_name)
{
    return compile_principal(parse_principal_expr(text), principal_name);
}

// ---------------------------------------------------------------- formulas

namespace {

PclClause parse_pcl_clause(Cursor& c)
{
    if (c.accept("(")) {
        auto cl = parse_pcl_clause(c);
        c.expect(")");
        return cl;
    }
    PclClause cl;
    cl.atoms.push_back(c.name());
    while (c.accept("&"))
        cl.atoms.push_back(c.name());
    if (c.accept("-->>")) {
        cl.kind = PclKind::CImpl;
        cl.conclusion = c.name();
    } else if (c.accept("->")) {
        cl.kind = PclKind::Impl;
        cl.conclusion = c.name();
    }
    return cl;
}

IllLiteral parse_literal(Cursor& c)
{
    IllLiteral l;
    l.atom = c.name();
    l.negative = c.accept("~");
    return l;
}

std::vector<IllLiteral> parse_tensor(Cursor& c)
{
    std::vector<IllLiteral> ls{parse_literal(c)};
    while (c.accept("*"))
        ls.push_back(parse_literal(c));
    return ls;
}

IllClause parse_ill_clause(Cursor& c)
{
    IllClause cl;
    std::size_t start = c.pos();
    auto lhs = parse_tensor(c);
    if (c.accept("-o")) {
        cl.kind = IllKind::HornImpl;
        for (const auto& l : lhs) {
            if (l.negative)
                throw Error(ErrorKind::InvalidFormula, "premises of an implication must be positive atoms", start);
            cl.premises.push_back(l.atom);
        }
        cl.conclusions = parse_tensor(c);
    } else {
        cl.conclusions = std::move(lhs);
    }
    validate(cl);
    return cl;
}

IllElement parse_ill_element(Cursor& c)
{
    if (!c.peek("("))
        return parse_ill_clause(c);
    IllFormula f;
    do {
        c.expect("(");
        f.clauses.push_back(parse_ill_clause(c));
        c.expect(")");
    } while (c.accept("*"));
    if (f.clauses.size() == 1)
        return f.clauses.front();
    validate(f);
    return f;
}

std::string print_clause(const IllClause& c)
{
    std::string s;
    if (c.kind == IllKind::HornImpl) {
        for (std::size_t k = 0; k < c.premises.size(); ++k)
            s += (k ? " * " : "") + c.premises[k];
        s += " -o ";
    }
    for (std::size_t k = 0; k < c.conclusions.size(); ++k)
        s += (k ? " * " : "") + c.conclusions[k].atom + (c.conclusions[k].negative ? "~" : "");
    return s;
}

}  // namespace

PclFormula parse_pcl(std::string_view text)
{
    Cursor c(text);
    PclFormula p;
    p.clauses.push_back(parse_pcl_clause(c));
    while (c.accept("/\\"))
        p.clauses.push_back(parse_pcl_clause(c));
    if (!c.at_end())
        syntax("unexpected character", c.pos());
    validate(p);
    return p;
}

IllContext parse_ill_context(std::string_view text)
{
    Cursor c(text);
    IllContext g{parse_ill_element(c)};
    while (c.accept(","))
        g.push_back(parse_ill_element(c));
    if (!c.at_end())
        syntax("unexpected character", c.pos());
    return g;
}

std::vector<IllLiteral> parse_ill_literals(std::string_view text)
{
    Cursor c(text);
    if (c.at_end())
        return {};
    auto ls = parse_tensor(c);
    if (!c.at_end())
        syntax("unexpected character", c.pos());
    return ls;
}

std::string print(const PclFormula& p)
{
    std::string s;
    for (std::size_t k = 0; k < p.clauses.size(); ++k) {
        const auto& cl = p.clauses[k];
        s += k ? " /\\ (" : "(";
        for (std::size_t j = 0; j < cl.atoms.size(); ++j)
            s += (j ? " & " : "") + cl.atoms[j];
        if (cl.kind == PclKind::Impl)
            s += " -> " + cl.conclusion;
        else if (cl.kind == PclKind::CImpl)
            s += " -->> " + cl.conclusion;
        s += ")";
    }
    return s;
}

std::string print(const IllContext& gamma)
{
    std::string s;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        if (k)
            s += ", ";
        if (const auto* c = std::get_if<IllClause>(&gamma[k])) {
            s += print_clause(*c);
        } else {
            const auto& f = std::get<IllFormula>(gamma[k]);
            for (std::size_t j = 0; j < f.clauses.size(); ++j)
                s += (j ? " * (" : "(") + print_clause(f.clauses[j]) + ")";
        }
    }
    return s;
}

}  // namespace cak
