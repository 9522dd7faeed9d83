#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gdag/graph.hpp"
#include "gdag/rational.hpp"

namespace gdag {

/// Nonempty subset of a cone's variables; bit i = variables[i].
using SubsetMask = std::uint32_t;

/// Homogeneous inequality sum_S coeff[S] * H(S) >= 0 over entropy coordinates.
///
/// Coefficients are kept as coprime integers (positive scaling only, which
/// preserves the inequality); dense, indexed by mask - 1.
class LinIneq {
public:
    LinIneq() = default;
    explicit LinIneq(int variable_count);
    LinIneq(int variable_count, std::vector<std::int64_t> coeffs);

    /// Scales rational coefficients to coprime integers. Throws
    /// PreconditionError on masks outside the variable range.
    static LinIneq from_rational(int variable_count, const std::map<SubsetMask, Rational>& terms);

    int variable_count() const { return n_; }
    std::size_t dimension() const { return coeffs_.size(); }
    std::int64_t coeff(SubsetMask s) const { return coeffs_[s - 1]; }
    std::span<const std::int64_t> coeffs() const { return coeffs_; }
    bool is_zero() const;

    /// Builder-style edit; call normalized() when done.
    LinIneq& add(SubsetMask s, std::int64_t value);
    LinIneq normalized() const;
    LinIneq negated() const;
    LinIneq operator+(const LinIneq& other) const;

    /// sum_S coeff[S] * h[S - 1]
    double evaluate(std::span<const double> h) const;

    friend bool operator==(const LinIneq&, const LinIneq&) = default;
    friend auto operator<=>(const LinIneq& a, const LinIneq& b)
    {
        if (auto c = a.n_ <=> b.n_; c != 0) {
            return c;
        }
        return a.coeffs_ <=> b.coeffs_;
    }

private:
    int n_ = 0;
    std::vector<std::int64_t> coeffs_;
};

/// I(S;T|U) >= 0 expanded to entropies (empty sets allowed for U).
LinIneq conditional_mutual_information_row(int variable_count, SubsetMask s, SubsetMask t, SubsetMask u);

/// A finite set of entropic inequalities over named variables.
class Cone {
public:
    Cone() = default;
    /// Normalizes rows, drops all-zero rows, deduplicates and sorts.
    Cone(std::vector<std::string> variables, std::vector<LinIneq> ineqs);

    const std::vector<std::string>& variables() const { return variables_; }
    int variable_count() const { return static_cast<int>(variables_.size()); }
    const std::vector<LinIneq>& ineqs() const { return ineqs_; }
    std::size_t size() const { return ineqs_.size(); }

    bool contains(const LinIneq& row) const;

    /// Throws UnknownNodeError.
    SubsetMask coordinate(std::span<const std::string> ids) const;
    SubsetMask coordinate(std::initializer_list<std::string_view> ids) const;
    /// Comma-joined ids sorted by id, e.g. "A,B".
    std::string coordinate_name(SubsetMask s) const;

    friend bool operator==(const Cone&, const Cone&) = default;

private:
    std::vector<std::string> variables_;
    std::vector<LinIneq> ineqs_;
};

inline constexpr int max_cone_variables = 12;

/// The Shannon cone generators: H(X | rest) >= 0 for each X and
/// I(X;Y|Z) >= 0 for each pair and each Z in the rest.
/// Throws PreconditionError for 0 or more than 8 variables.
Cone elemental_inequalities(const std::vector<std::string>& variables);

/// -I(X ; ND(X) | Pa(X)) >= 0 for every node with nonempty non-descendants,
/// over the graph's node ids in declaration order.
std::vector<LinIneq> markov_constraint_rows(const GDag& g);

/// True iff `ineq` is a nonnegative combination of the cone's rows.
/// Throws PreconditionError on a dimension mismatch.
bool implied_by(const LinIneq& ineq, const Cone& cone);

/// Drops rows implied by the others until none is.
Cone remove_redundant(const Cone& cone);

/// One Fourier-Motzkin step on `coord`, followed by redundancy removal.
/// Throws PreconditionError for an invalid coordinate.
Cone fourier_motzkin_eliminate(const Cone& cone, SubsetMask coord);

/// Re-expresses a cone whose rows only mention subsets of `kept` over those
/// variables alone. Throws PreconditionError otherwise.
Cone restrict_to(const Cone& cone, const std::vector<std::string>& kept);

struct DeriveOptions {
    /// Lifts the six-node guard.
    bool long_run = false;
    /// Called after each elimination with (done, total, current row count).
    std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

/// Shannon cone over all nodes plus Markov rows, with every
/// latent-containing coordinate projected out (ascending subset size),
/// expressed over the observed nodes. Throws PreconditionError past the guard.
Cone derive_classical_cone(const GDag& g, const DeriveOptions& options = {});

/// Shannon cone over the observed nodes plus -I(x;y|z) >= 0 for every
/// observable d-separation statement; redundancy-free.
Cone derive_independence_cone(const GDag& g, const DeriveOptions& options = {});

/// Rows of `candidates` not implied by `reference` (same variables).
std::vector<LinIneq> non_implied_rows(const Cone& candidates, const Cone& reference);

} // namespace gdag
