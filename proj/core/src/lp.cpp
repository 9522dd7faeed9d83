#include "gdag/lp.hpp"

#include "gdag/error.hpp"

namespace gdag {

int LpProblem::add_variable(std::string name, bool nonnegative)
{
    names_.push_back(std::move(name));
    nonnegative_.push_back(nonnegative);
    return variable_count() - 1;
}

void LpProblem::add_constraint(LinearConstraint c)
{
    for (const auto& [var, coeff] : c.terms) {
        if (var < 0 || var >= variable_count()) {
            throw PreconditionError("constraint refers to an unknown variable");
        }
    }
    constraints_.push_back(std::move(c));
}

std::optional<std::vector<Rational>> standard_form_feasible(const std::vector<std::vector<Rational>>& a,
                                                            const std::vector<Rational>& b)
{
    const std::size_t m = a.size();
    const std::size_t n = m == 0 ? 0 : a[0].size();
    if (b.size() != m) {
        throw PreconditionError("right-hand side has the wrong length");
    }
    // Phase-1 tableau: columns 0..n-1 original, n..n+m-1 artificial, last = rhs.
    const std::size_t cols = n + m + 1;
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) {
            throw PreconditionError("ragged constraint matrix");
        }
        const bool flip = sgn(b[i]) < 0;
        for (std::size_t j = 0; j < n; ++j) {
            t[i][j] = flip ? Rational(-a[i][j]) : a[i][j];
        }
        t[i][n + i] = 1;
        t[i][cols - 1] = flip ? Rational(-b[i]) : b[i];
        basis[i] = n + i;
    }
    // Reduced costs of min sum(artificials): c_j - sum_i t[i][j] for originals.
    std::vector<Rational> cost(cols);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[j] -= t[i][j];
        }
        cost[cols - 1] -= t[i][cols - 1];
    }

    for (;;) {
        // Bland: lowest-index improving column.
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (sgn(cost[j]) < 0) {
                enter = j;
                break;
            }
        }
        if (enter == cols) {
            break;
        }
        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(t[i][enter]) > 0) {
                Rational ratio = t[i][cols - 1] / t[i][enter];
                if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = std::move(ratio);
                }
            }
        }
        if (leave == m) {
            // Phase 1 is bounded below by zero, so this cannot happen.
            break;
        }
        const Rational pivot = t[leave][enter];
        for (auto& v : t[leave]) {
            if (sgn(v) != 0) {
                v /= pivot;
            }
        }
        auto eliminate = [&](std::vector<Rational>& row) {
            const Rational f = row[enter];
            if (sgn(f) == 0) {
                return;
            }
            for (std::size_t j = 0; j < cols; ++j) {
                if (sgn(t[leave][j]) != 0) {
                    row[j] -= f * t[leave][j];
                }
            }
        };
        for (std::size_t i = 0; i < m; ++i) {
            if (i != leave) {
                eliminate(t[i]);
            }
        }
        eliminate(cost);
        basis[leave] = enter;
    }

    if (sgn(cost[cols - 1]) != 0) {
        return std::nullopt;
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) {
            x[basis[i]] = t[i][cols - 1];
        }
    }
    return x;
}

std::optional<std::vector<Rational>> lp_feasible(const LpProblem& problem)
{
    // Column layout: for each variable a positive part, plus a negative part
    // for free variables; then one slack per inequality.
    const int nv = problem.variable_count();
    std::vector<std::size_t> pos(static_cast<std::size_t>(nv));
    std::vector<long> neg(static_cast<std::size_t>(nv), -1);
    std::size_t cols = 0;
    for (int v = 0; v < nv; ++v) {
        pos[static_cast<std::size_t>(v)] = cols++;
        if (!problem.nonnegative(v)) {
            neg[static_cast<std::size_t>(v)] = static_cast<long>(cols++);
        }
    }
    const auto& cons = problem.constraints();
    if (cons.empty()) {
        return std::vector<Rational>(static_cast<std::size_t>(nv));
    }
    std::vector<std::size_t> slack(cons.size(), 0);
    for (std::size_t i = 0; i < cons.size(); ++i) {
        if (cons[i].relation != Relation::equal) {
            slack[i] = cols++;
        }
    }
    std::vector<std::vector<Rational>> a(cons.size(), std::vector<Rational>(cols));
    std::vector<Rational> b(cons.size());
    for (std::size_t i = 0; i < cons.size(); ++i) {
        for (const auto& [var, coeff] : cons[i].terms) {
            const auto uv = static_cast<std::size_t>(var);
            a[i][pos[uv]] += coeff;
            if (neg[uv] >= 0) {
                a[i][static_cast<std::size_t>(neg[uv])] -= coeff;
            }
        }
        if (cons[i].relation == Relation::greater_equal) {
            a[i][slack[i]] = -1;
        } else if (cons[i].relation == Relation::less_equal) {
            a[i][slack[i]] = 1;
        }
        b[i] = cons[i].rhs;
    }
    auto sol = standard_form_feasible(a, b);
    if (!sol) {
        return std::nullopt;
    }
    std::vector<Rational> x(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        const auto uv = static_cast<std::size_t>(v);
        x[uv] = (*sol)[pos[uv]];
        if (neg[uv] >= 0) {
            x[uv] -= (*sol)[static_cast<std::size_t>(neg[uv])];
        }
    }
    return x;
}

} // namespace gdag
