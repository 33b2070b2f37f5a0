#pragma once

#include "cak/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cak {

enum class VarKind { Continuous, Integer, Binary };
enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    /// nullopt means unbounded in that direction.
    std::optional<Rational> lower = Rational(0);
    std::optional<Rational> upper;
};

using LinearTerms = std::vector<std::pair<std::size_t, Rational>>;

struct Constraint {
    LinearTerms terms;
    Relation relation = Relation::LessEq;
    Rational rhs;
    std::string name;
};

/// Linear model with continuous, integer and binary variables.
class MilpModel {
public:
    std::size_t add_variable(std::string name, VarKind kind, std::optional<Rational> lower = Rational(0),
                             std::optional<Rational> upper = std::nullopt);
    void add_constraint(LinearTerms terms, Relation relation, Rational rhs, std::string name = {});
    void set_objective(Sense sense, LinearTerms terms);

    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    Sense sense() const noexcept { return sense_; }
    const LinearTerms& objective() const noexcept { return objective_; }

    Variable& variable(std::size_t i) { return variables_.at(i); }

    /// Throws MalformedModel on dangling indices or inconsistent bounds.
    void validate() const;
    /// True iff the assignment satisfies bounds, rows and integrality exactly.
    bool satisfies(const std::vector<Rational>& x) const;
    Rational evaluate(const std::vector<Rational>& x) const;

    /// LP-like plain-text dump with exact rationals.
    std::string to_lp_text() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    Sense sense_ = Sense::Minimize;
    LinearTerms objective_;
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, CapExceeded };

const char* status_name(MilpStatus s) noexcept;

struct MilpOutcome {
    MilpStatus status = MilpStatus::Infeasible;
    Rational value;
    std::vector<Rational> assignment;
    std::size_t nodes = 0;
};

struct MilpOptions {
    std::size_t node_budget = 100000;
};

/// Node budget from CAK_NODE_BUDGET when set, else the default.
MilpOptions default_milp_options();

/// Exact optimum of the continuous relaxation.
MilpOutcome solve_lp(const MilpModel& model);
/// Exact optimum by branch-and-bound; CapExceeded when the node budget runs out.
MilpOutcome solve_milp(const MilpModel& model, const MilpOptions& options = default_milp_options());

namespace detail {

/// Dual information read back from the optimal basis of solve_lp.
struct DualCertificate {
    bool available = false;
    /// Objective value of the dual solution, in the model's own sense.
    Rational dual_value;
    /// True iff the reduced costs have the signs required by optimality.
    bool dual_feasible = false;
};

DualCertificate lp_dual_certificate(const MilpModel& model);

}  // namespace detail

}  // namespace cak
