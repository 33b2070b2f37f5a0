#include "cak/milp.hpp"

#include "cak/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace cak {

// ---------------------------------------------------------------- rationals

std::string to_string(const Rational& r)
{
    return r.get_str();
}

std::string to_decimal(const Rational& r, int digits)
{
    mpz_class scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    mpq_class scaled = r * scale;
    mpz_class num = scaled.get_num(), den = scaled.get_den();
    mpz_class q = abs(num) / den, rem = abs(num) % den;
    if (rem * 2 >= den)
        q += 1;
    std::string digits_str = q.get_str();
    bool negative = sgn(num) < 0 && q != 0;
    if (static_cast<int>(digits_str.size()) <= digits)
        digits_str.insert(0, static_cast<std::size_t>(digits + 1 - static_cast<int>(digits_str.size())), '0');
    std::string s = digits_str.substr(0, digits_str.size() - static_cast<std::size_t>(digits));
    if (digits > 0)
        s += "." + digits_str.substr(digits_str.size() - static_cast<std::size_t>(digits));
    return negative ? "-" + s : s;
}

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto slash = s.find('/');
    auto digits_ok = [](const std::string& p, bool sign) {
        std::size_t start = (sign && !p.empty() && p[0] == '-') ? 1 : 0;
        if (p.size() <= start)
            return false;
        return std::all_of(p.begin() + static_cast<long>(start), p.end(),
                           [](char c) { return c >= '0' && c <= '9'; });
    };
    if (slash == std::string::npos ? !digits_ok(s, true)
                                   : !digits_ok(s.substr(0, slash), true) || !digits_ok(s.substr(slash + 1), false))
        throw Error(ErrorKind::SyntaxError, "invalid rational '" + s + "'", 0);
    Rational r(s);
    if (r.get_den() == 0)
        throw Error(ErrorKind::SyntaxError, "zero denominator in '" + s + "'", slash);
    r.canonicalize();
    return r;
}

bool is_integer(const Rational& r)
{
    return r.get_den() == 1;
}

Rational floor(const Rational& r)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

Rational ceil(const Rational& r)
{
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return Rational(q);
}

// -------------------------------------------------------------------- model

namespace {

void canonical(Rational& r)
{
    r.canonicalize();
}

void canonical(LinearTerms& terms)
{
    for (auto& t : terms)
        t.second.canonicalize();
}

}  // namespace

std::size_t MilpModel::add_variable(std::string name, VarKind kind, std::optional<Rational> lower,
                                    std::optional<Rational> upper)
{
    if (kind == VarKind::Binary) {
        lower = Rational(0);
        upper = Rational(1);
    }
    if (lower)
        canonical(*lower);
    if (upper)
        canonical(*upper);
    variables_.push_back({std::move(name), kind, std::move(lower), std::move(upper)});
    return variables_.size() - 1;
}

void MilpModel::add_constraint(LinearTerms terms, Relation relation, Rational rhs, std::string name)
{
    canonical(terms);
    canonical(rhs);
    constraints_.push_back({std::move(terms), relation, std::move(rhs), std::move(name)});
}

void MilpModel::set_objective(Sense sense, LinearTerms terms)
{
    canonical(terms);
    sense_ = sense;
    objective_ = std::move(terms);
}

void MilpModel::validate() const
{
    auto check_terms = [&](const LinearTerms& terms) {
        for (const auto& [j, c] : terms)
            if (j >= variables_.size())
                throw Error(ErrorKind::MalformedModel, "term references undeclared variable " + std::to_string(j));
    };
    for (const auto& v : variables_) {
        if (v.lower && v.upper && *v.lower > *v.upper)
            throw Error(ErrorKind::MalformedModel, "variable " + v.name + " has lower bound above upper bound");
        if (v.kind == VarKind::Binary && (!v.lower || !v.upper || *v.lower != 0 || *v.upper != 1))
            throw Error(ErrorKind::MalformedModel, "binary variable " + v.name + " must have bounds [0,1]");
    }
    for (const auto& c : constraints_)
        check_terms(c.terms);
    check_terms(objective_);
}

Rational MilpModel::evaluate(const std::vector<Rational>& x) const
{
    Rational s = 0;
    for (const auto& [j, c] : objective_)
        s += c * x.at(j);
    return s;
}

bool MilpModel::satisfies(const std::vector<Rational>& x) const
{
    if (x.size() != variables_.size())
        return false;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        const auto& v = variables_[j];
        if ((v.lower && x[j] < *v.lower) || (v.upper && x[j] > *v.upper))
            return false;
        if (v.kind != VarKind::Continuous && !is_integer(x[j]))
            return false;
    }
    for (const auto& c : constraints_) {
        Rational s = 0;
        for (const auto& [j, a] : c.terms)
            s += a * x[j];
        bool ok = c.relation == Relation::LessEq ? s <= c.rhs : c.relation == Relation::Equal ? s == c.rhs : s >= c.rhs;
        if (!ok)
            return false;
    }
    return true;
}

std::string MilpModel::to_lp_text() const
{
    std::ostringstream out;
    auto terms_text = [&](const LinearTerms& terms) {
        std::string s;
        bool first = true;
        for (const auto& [j, c] : terms) {
            if (c == 0)
                continue;
            std::string cs = to_string(abs(c));
            s += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            s += (cs == "1" ? "" : cs + " ") + variables_[j].name;
            first = false;
        }
        return first ? std::string("0") : s;
    };
    out << (sense_ == Sense::Minimize ? "minimize" : "maximize") << "\n  obj: " << terms_text(objective_) << "\n";
    out << "subject to\n";
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        const auto& c = constraints_[i];
        out << "  " << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ": " << terms_text(c.terms)
            << (c.relation == Relation::LessEq ? " <= " : c.relation == Relation::Equal ? " = " : " >= ")
            << to_string(c.rhs) << "\n";
    }
    out << "bounds\n";
    for (const auto& v : variables_) {
        out << "  " << (v.lower ? to_string(*v.lower) : std::string("-inf")) << " <= " << v.name << " <= "
            << (v.upper ? to_string(*v.upper) : std::string("+inf")) << "\n";
    }
    std::string ints, bins;
    for (const auto& v : variables_) {
        if (v.kind == VarKind::Integer)
            ints += " " + v.name;
        if (v.kind == VarKind::Binary)
            bins += " " + v.name;
    }
    if (!ints.empty())
        out << "general\n " << ints << "\n";
    if (!bins.empty())
        out << "binary\n " << bins << "\n";
    out << "end\n";
    return out.str();
}

const char* status_name(MilpStatus s) noexcept
{
    switch (s) {
    case MilpStatus::Optimal: return "Optimal";
    case MilpStatus::Infeasible: return "Infeasible";
    case MilpStatus::Unbounded: return "Unbounded";
    case MilpStatus::CapExceeded: return "CapExceeded";
    }
    return "Unknown";
}

MilpOptions default_milp_options()
{
    MilpOptions o;
    if (const char* env = std::getenv("CAK_NODE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0)
            o.node_budget = static_cast<std::size_t>(v);
    }
    return o;
}

// -------------------------------------------------------- bounded simplex

namespace {

using Bounds = std::vector<std::optional<Rational>>;

/// Standard form: minimize cost·y + constant s.t. A y = b (b ≥ 0), 0 ≤ y ≤ upper.
/// Columns are transformed structurals, then slacks, then one artificial per row.
struct StandardForm {
    std::size_t rows = 0, cols = 0, first_artificial = 0;
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;
    std::vector<std::optional<Rational>> upper;
    std::vector<Rational> cost;
    Rational constant;
    // x_j = shift_j + sign_j * y_{col_j} (- y_{neg_j} for free variables)
    std::vector<Rational> shift;
    std::vector<int> sign;
    std::vector<std::size_t> col, neg;
    /// Per row, a slack column with coefficient +1 or none.
    std::vector<std::size_t> unit_slack;
    bool maximize = false;
};

constexpr std::size_t none = static_cast<std::size_t>(-1);

StandardForm standardize(const MilpModel& m, const Bounds& lower, const Bounds& upper)
{
    StandardForm f;
    const auto& vars = m.variables();
    const std::size_t nv = vars.size();
    f.shift.assign(nv, 0);
    f.sign.assign(nv, 1);
    f.col.assign(nv, none);
    f.neg.assign(nv, none);
    std::vector<std::optional<Rational>> col_upper;
    for (std::size_t j = 0; j < nv; ++j) {
        f.col[j] = col_upper.size();
        if (lower[j]) {
            f.shift[j] = *lower[j];
            col_upper.push_back(upper[j] ? std::optional<Rational>(*upper[j] - *lower[j]) : std::nullopt);
        } else if (upper[j]) {
            f.shift[j] = *upper[j];
            f.sign[j] = -1;
            col_upper.push_back(std::nullopt);
        } else {
            col_upper.push_back(std::nullopt);
            f.neg[j] = col_upper.size();
            col_upper.push_back(std::nullopt);
        }
    }
    const std::size_t structural = col_upper.size();
    std::size_t slacks = 0;
    for (const auto& c : m.constraints())
        if (c.relation != Relation::Equal)
            ++slacks;
    f.rows = m.constraints().size();
    f.first_artificial = structural + slacks;
    f.cols = f.first_artificial + f.rows;
    f.a.assign(f.rows, std::vector<Rational>(f.cols, 0));
    f.b.assign(f.rows, 0);
    f.upper = col_upper;
    f.upper.resize(f.cols);
    std::size_t slack = structural;
    f.unit_slack.assign(f.rows, none);
    for (std::size_t i = 0; i < f.rows; ++i) {
        const auto& c = m.constraints()[i];
        auto& row = f.a[i];
        Rational rhs = c.rhs;
        for (const auto& [j, coef] : c.terms) {
            rhs -= coef * f.shift[j];
            row[f.col[j]] += coef * f.sign[j];
            if (f.neg[j] != none)
                row[f.neg[j]] -= coef;
        }
        std::size_t own = none;
        if (c.relation == Relation::LessEq)
            row[own = slack++] = 1;
        else if (c.relation == Relation::GreaterEq)
            row[own = slack++] = -1;
        if (rhs < 0) {
            for (auto& v : row)
                v = -v;
            rhs = -rhs;
        }
        if (own != none && sgn(row[own]) > 0)
            f.unit_slack[i] = own;
        row[f.first_artificial + i] = 1;
        f.b[i] = rhs;
    }
    f.maximize = m.sense() == Sense::Maximize;
    f.cost.assign(f.cols, 0);
    for (const auto& [j, coef] : m.objective()) {
        Rational c = f.maximize ? Rational(-coef) : coef;
        f.constant += c * f.shift[j];
        f.cost[f.col[j]] += c * f.sign[j];
        if (f.neg[j] != none)
            f.cost[f.neg[j]] -= c;
    }
    return f;
}

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct Tableau {
    const StandardForm& f;
    std::vector<std::vector<Rational>> t;
    std::vector<Rational> beta;
    std::vector<std::size_t> basis;
    std::vector<bool> is_basic, at_upper;
    std::vector<std::optional<Rational>> upper;

    explicit Tableau(const StandardForm& form)
        : f(form), t(form.a), beta(form.b), basis(form.rows), is_basic(form.cols, false),
          at_upper(form.cols, false), upper(form.upper)
    {
        // Rows with a +1 slack start from it; the rest from their artificial.
        for (std::size_t i = 0; i < f.rows; ++i) {
            basis[i] = f.unit_slack[i] != none ? f.unit_slack[i] : f.first_artificial + i;
            is_basic[basis[i]] = true;
        }
    }

    Rational value(std::size_t j) const
    {
        if (is_basic[j]) {
            for (std::size_t i = 0; i < basis.size(); ++i)
                if (basis[i] == j)
                    return beta[i];
        }
        return at_upper[j] ? *upper[j] : Rational(0);
    }

    void pivot(std::size_t r, std::size_t j, std::vector<Rational>& d)
    {
        Rational p = t[r][j];
        std::vector<std::size_t> nz;
        for (std::size_t k = 0; k < f.cols; ++k)
            if (sgn(t[r][k]) != 0) {
                t[r][k] /= p;
                nz.push_back(k);
            }
        auto eliminate = [&](std::vector<Rational>& row) {
            if (sgn(row[j]) == 0)
                return;
            Rational factor = row[j];
            for (auto k : nz)
                row[k] -= factor * t[r][k];
        };
        for (std::size_t i = 0; i < f.rows; ++i)
            if (i != r)
                eliminate(t[i]);
        eliminate(d);
    }

    LpStatus run(const std::vector<Rational>& cost)
    {
        std::vector<Rational> d = cost;
        for (std::size_t i = 0; i < f.rows; ++i) {
            const Rational& cb = cost[basis[i]];
            if (sgn(cb) == 0)
                continue;
            for (std::size_t k = 0; k < f.cols; ++k)
                if (sgn(t[i][k]) != 0)
                    d[k] -= cb * t[i][k];
        }
        // Dantzig pricing; after a run of degenerate pivots switch to Bland's
        // rule until the objective moves again, which rules out cycling.
        std::size_t degenerate = 0;
        for (;;) {
            const bool bland = degenerate >= 32;
            std::size_t enter = none;
            Rational best;
            for (std::size_t k = 0; k < f.cols; ++k) {
                if (is_basic[k] || (upper[k] && sgn(*upper[k]) == 0))
                    continue;
                if (at_upper[k] ? sgn(d[k]) <= 0 : sgn(d[k]) >= 0)
                    continue;
                if (bland) {
                    enter = k;
                    break;
                }
                Rational score = abs(d[k]);
                if (enter == none || score > best) {
                    enter = k;
                    best = std::move(score);
                }
            }
            if (enter == none)
                return LpStatus::Optimal;
            const int dir = at_upper[enter] ? -1 : 1;
            std::optional<Rational> theta;
            std::size_t leave_row = none, leave_var = none;
            bool leave_to_upper = false;
            if (upper[enter]) {
                theta = *upper[enter];
                leave_var = enter;
            }
            for (std::size_t i = 0; i < f.rows; ++i) {
                if (sgn(t[i][enter]) == 0)
                    continue;
                Rational delta = dir > 0 ? Rational(-t[i][enter]) : t[i][enter];
                std::optional<Rational> lim;
                bool to_upper = false;
                if (sgn(delta) < 0) {
                    lim = beta[i] / -delta;
                } else if (upper[basis[i]]) {
                    lim = (*upper[basis[i]] - beta[i]) / delta;
                    to_upper = true;
                }
                if (!lim)
                    continue;
                if (!theta || *lim < *theta || (*lim == *theta && basis[i] < leave_var)) {
                    theta = lim;
                    leave_row = i;
                    leave_var = basis[i];
                    leave_to_upper = to_upper;
                }
            }
            if (!theta)
                return LpStatus::Unbounded;
            degenerate = sgn(*theta) == 0 ? degenerate + 1 : 0;
            for (std::size_t i = 0; i < f.rows; ++i)
                if (sgn(t[i][enter]) != 0)
                    beta[i] += (dir > 0 ? Rational(-t[i][enter]) : t[i][enter]) * *theta;
            if (leave_var == enter) {
                at_upper[enter] = !at_upper[enter];
                continue;
            }
            Rational entering_value = dir > 0 ? *theta : Rational(*upper[enter] - *theta);
            std::size_t old = basis[leave_row];
            is_basic[old] = false;
            at_upper[old] = leave_to_upper;
            basis[leave_row] = enter;
            is_basic[enter] = true;
            at_upper[enter] = false;
            beta[leave_row] = entering_value;
            pivot(leave_row, enter, d);
        }
    }
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> x;
    detail::DualCertificate certificate;
};

LpResult solve_relaxation(const MilpModel& m, const Bounds& lower, const Bounds& upper, bool want_dual = false)
{
    LpResult res;
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (lower[j] && upper[j] && *lower[j] > *upper[j])
            return res;
    StandardForm f = standardize(m, lower, upper);
    Tableau tab(f);
    std::vector<Rational> phase1(f.cols, 0);
    for (std::size_t i = 0; i < f.rows; ++i)
        phase1[f.first_artificial + i] = 1;
    tab.run(phase1);
    Rational infeas = 0;
    for (std::size_t i = 0; i < f.rows; ++i)
        infeas += tab.value(f.first_artificial + i);
    if (sgn(infeas) > 0)
        return res;
    for (std::size_t i = 0; i < f.rows; ++i)
        tab.upper[f.first_artificial + i] = Rational(0);
    if (tab.run(f.cost) == LpStatus::Unbounded) {
        res.status = LpStatus::Unbounded;
        return res;
    }
    std::vector<Rational> y(f.cols);
    for (std::size_t i = 0; i < f.rows; ++i)
        y[tab.basis[i]] = tab.beta[i];
    for (std::size_t k = 0; k < f.cols; ++k)
        if (!tab.is_basic[k] && tab.at_upper[k])
            y[k] = *tab.upper[k];
    const std::size_t nv = m.variables().size();
    res.x.assign(nv, 0);
    for (std::size_t j = 0; j < nv; ++j) {
        res.x[j] = f.shift[j] + f.sign[j] * y[f.col[j]];
        if (f.neg[j] != none)
            res.x[j] -= y[f.neg[j]];
    }
    res.status = LpStatus::Optimal;
    res.value = m.evaluate(res.x);

    if (want_dual) {
        // Row duals from B^{-1}, read off the artificial columns.
        std::vector<Rational> dual(f.rows, 0);
        for (std::size_t i = 0; i < f.rows; ++i)
            for (std::size_t k = 0; k < f.rows; ++k)
                dual[i] += f.cost[tab.basis[k]] * tab.t[k][f.first_artificial + i];
        Rational obj = f.constant;
        for (std::size_t i = 0; i < f.rows; ++i)
            obj += dual[i] * f.b[i];
        bool feasible = true;
        for (std::size_t k = 0; k < f.first_artificial; ++k) {
            Rational reduced = f.cost[k];
            for (std::size_t i = 0; i < f.rows; ++i)
                reduced -= dual[i] * f.a[i][k];
            if (tab.is_basic[k]) {
                feasible = feasible && sgn(reduced) == 0;
            } else if (tab.at_upper[k]) {
                feasible = feasible && sgn(reduced) <= 0;
                obj += *f.upper[k] * reduced;
            } else {
                feasible = feasible && sgn(reduced) >= 0;
            }
        }
        res.certificate.available = true;
        res.certificate.dual_feasible = feasible;
        res.certificate.dual_value = f.maximize ? Rational(-obj) : obj;
    }
    return res;
}

void initial_bounds(const MilpModel& m, Bounds& lower, Bounds& upper, bool integral)
{
    for (const auto& v : m.variables()) {
        auto lo = v.lower, hi = v.upper;
        if (integral && v.kind != VarKind::Continuous) {
            if (lo)
                lo = ceil(*lo);
            if (hi)
                hi = floor(*hi);
        }
        lower.push_back(lo);
        upper.push_back(hi);
    }
}

}  // namespace

MilpOutcome solve_lp(const MilpModel& model)
{
    model.validate();
    Bounds lower, upper;
    initial_bounds(model, lower, upper, false);
    auto r = solve_relaxation(model, lower, upper);
    MilpOutcome out;
    out.nodes = 1;
    if (r.status == LpStatus::Infeasible)
        out.status = MilpStatus::Infeasible;
    else if (r.status == LpStatus::Unbounded)
        out.status = MilpStatus::Unbounded;
    else {
        out.status = MilpStatus::Optimal;
        out.value = r.value;
        out.assignment = std::move(r.x);
    }
    return out;
}

namespace detail {

DualCertificate lp_dual_certificate(const MilpModel& model)
{
    model.validate();
    Bounds lower, upper;
    initial_bounds(model, lower, upper, false);
    auto r = solve_relaxation(model, lower, upper, true);
    return r.status == LpStatus::Optimal ? r.certificate : DualCertificate{};
}

}  // namespace detail

MilpOutcome solve_milp(const MilpModel& model, const MilpOptions& options)
{
    model.validate();
    const auto& vars = model.variables();
    const bool minimize = model.sense() == Sense::Minimize;
    // An objective over integer variables with integer coefficients takes
    // integer values, so LP bounds may be rounded.
    bool integral_objective = true;
    for (const auto& [j, c] : model.objective())
        if (sgn(c) != 0 && (vars[j].kind == VarKind::Continuous || !is_integer(c)))
            integral_objective = false;

    struct Node {
        Bounds lower, upper;
        std::optional<Rational> parent_bound;
        std::size_t seq;
    };
    std::vector<Node> open;
    std::size_t seq = 0;
    {
        Node root;
        initial_bounds(model, root.lower, root.upper, true);
        root.seq = seq++;
        open.push_back(std::move(root));
    }
    MilpOutcome out;
    std::optional<Rational> incumbent;
    std::vector<Rational> best;
    auto better = [&](const Rational& a, const Rational& b) { return minimize ? a < b : a > b; };
    auto rounded = [&](const Rational& v) {
        return integral_objective ? (minimize ? ceil(v) : floor(v)) : v;
    };

    while (!open.empty()) {
        std::size_t pick = open.size() - 1;
        if (incumbent) {
            for (std::size_t k = 0; k < open.size(); ++k) {
                const auto& a = open[k];
                const auto& b = open[pick];
                if (a.parent_bound && b.parent_bound &&
                    (better(*a.parent_bound, *b.parent_bound) ||
                     (*a.parent_bound == *b.parent_bound && a.seq < b.seq)))
                    pick = k;
            }
        }
        Node node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<long>(pick));
        if (incumbent && node.parent_bound && !better(rounded(*node.parent_bound), *incumbent))
            continue;
        if (out.nodes >= options.node_budget) {
            out.status = MilpStatus::CapExceeded;
            if (incumbent) {
                out.value = *incumbent;
                out.assignment = best;
            }
            return out;
        }
        ++out.nodes;
        auto r = solve_relaxation(model, node.lower, node.upper);
        if (r.status == LpStatus::Infeasible)
            continue;
        if (r.status == LpStatus::Unbounded) {
            out.status = MilpStatus::Unbounded;
            return out;
        }
        if (incumbent && !better(rounded(r.value), *incumbent))
            continue;
        // Most fractional integer variable; ties to the lowest index.
        std::size_t branch = none;
        Rational best_frac = -1;
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (vars[j].kind == VarKind::Continuous || is_integer(r.x[j]))
                continue;
            Rational frac = r.x[j] - floor(r.x[j]);
            Rational dist = frac < Rational(1, 2) ? frac : Rational(1 - frac);
            if (dist > best_frac) {
                best_frac = dist;
                branch = j;
            }
        }
        if (branch == none) {
            incumbent = r.value;
            best = std::move(r.x);
            continue;
        }
        Node up{node.lower, node.upper, r.value, seq++};
        up.lower[branch] = ceil(r.x[branch]);
        Node down{std::move(node.lower), std::move(node.upper), r.value, seq++};
        down.upper[branch] = floor(r.x[branch]);
        // Depth-first dives take the last pushed node: explore "down" first.
        open.push_back(std::move(up));
        open.push_back(std::move(down));
    }
    if (!incumbent) {
        out.status = MilpStatus::Infeasible;
        return out;
    }
    out.status = MilpStatus::Optimal;
    out.value = *incumbent;
    out.assignment = std::move(best);
    return out;
}

}  // namespace cak
