#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gdag/rational.hpp"

namespace gdag {

enum class Relation { greater_equal, less_equal, equal };

struct LinearConstraint {
    /// (variable index, coefficient)
    std::vector<std::pair<int, Rational>> terms;
    Relation relation = Relation::greater_equal;
    Rational rhs = 0;
};

/// A finite system of linear constraints over named rational variables.
/// Variables are free unless declared nonnegative.
class LpProblem {
public:
    int add_variable(std::string name, bool nonnegative = false);
    /// Throws PreconditionError if a term names an unknown variable.
    void add_constraint(LinearConstraint c);

    int variable_count() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    bool nonnegative(int i) const { return nonnegative_.at(static_cast<std::size_t>(i)); }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

private:
    std::vector<std::string> names_;
    std::vector<bool> nonnegative_;
    std::vector<LinearConstraint> constraints_;
};

/// A feasible point (one value per variable), or nothing if the system is
/// infeasible. Exact two-phase simplex with Bland's rule.
std::optional<std::vector<Rational>> lp_feasible(const LpProblem& problem);

/// Dense rational feasibility of { A x = b, x >= 0 }; returns x or nothing.
/// Exposed for callers that already hold standard-form data.
std::optional<std::vector<Rational>> standard_form_feasible(const std::vector<std::vector<Rational>>& a,
                                                            const std::vector<Rational>& b);

} // namespace gdag
