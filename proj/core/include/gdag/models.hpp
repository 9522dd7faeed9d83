#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gdag/dsep.hpp"
#include "gdag/graph.hpp"
#include "gdag/rational.hpp"

namespace gdag {

/// A named finite variable.
struct Variable {
    std::string id;
    int card = 1;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Mixed-radix indexing over an ordered list of variables. The first
/// variable is the most significant digit (row-major order).
class OutcomeSpace {
public:
    OutcomeSpace() = default;
    explicit OutcomeSpace(std::vector<int> cards);

    std::size_t size() const { return size_; }
    std::span<const int> cards() const { return cards_; }
    std::size_t stride(std::size_t var) const { return strides_[var]; }

    std::size_t index(std::span<const int> outcome) const;
    void decode(std::size_t index, std::span<int> outcome) const;

    friend bool operator==(const OutcomeSpace&, const OutcomeSpace&) = default;

private:
    std::vector<int> cards_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 1;
};

/// Exact joint distribution over named variables, row-major in declaration order.
class Distribution {
public:
    Distribution() = default;

    /// Throws ValidationError unless the table has the right size, is
    /// nonnegative and sums to exactly one.
    Distribution(std::vector<Variable> variables, std::vector<Rational> probs);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Rational>& probs() const { return probs_; }
    const OutcomeSpace& space() const { return space_; }
    int variable_count() const { return static_cast<int>(variables_.size()); }

    const Rational& prob(std::span<const int> outcome) const { return probs_[space_.index(outcome)]; }

    /// Throws UnknownNodeError.
    int index_of(std::string_view id) const;
    NodeSet var_set(std::span<const std::string> ids) const;
    NodeSet var_set(std::initializer_list<std::string_view> ids) const;
    NodeSet all() const { return NodeSet::first(variable_count()); }

    /// Marginal table over `vars`, row-major in ascending variable index.
    std::vector<Rational> marginal_table(NodeSet vars) const;
    Distribution marginal(NodeSet vars) const;

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    std::vector<Variable> variables_;
    std::vector<Rational> probs_;
    OutcomeSpace space_;
};

/// A family of distributions over `variables`, one per outcome of `given`.
/// Row-major with the given variables outermost.
class ConditionalTable {
public:
    ConditionalTable() = default;

    /// Throws ValidationError if a slice is negative or does not sum to one.
    ConditionalTable(std::vector<Variable> variables, std::vector<Variable> given, std::vector<Rational> probs);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Variable>& given() const { return given_; }
    const std::vector<Rational>& probs() const { return probs_; }

    std::size_t given_size() const { return given_space_.size(); }
    std::size_t slice_size() const { return slice_space_.size(); }
    const OutcomeSpace& given_space() const { return given_space_; }
    const OutcomeSpace& slice_space() const { return slice_space_; }

    /// P(slice | given), both as flat indices.
    const Rational& at(std::size_t given_index, std::size_t slice_index) const
    {
        return probs_[given_index * slice_space_.size() + slice_index];
    }

private:
    std::vector<Variable> variables_;
    std::vector<Variable> given_;
    std::vector<Rational> probs_;
    OutcomeSpace given_space_;
    OutcomeSpace slice_space_;
};

/// P(node | parents): a conditional table with exactly one variable.
using Cpt = ConditionalTable;

/// Classical model on a GDAG with finite latent messages.
///
/// Every edge leaving an unobserved node carries a message of finite
/// cardinality; every edge leaving an observed node carries that node's
/// outcome. Node v's kernel is a table p(outputs | inputs), row-major with
/// inputs outermost. Inputs are the values on incoming edges, ordered by
/// parent index. Outputs are the node's outcome (observed nodes) or one
/// message per outgoing edge ordered by child index (unobserved nodes).
struct ClassicalGmcModel {
    GDag gdag;
    /// Outcome cardinality per node; entries for unobserved nodes are ignored.
    std::vector<int> cards;
    /// Message cardinality of each edge with an unobserved tail.
    std::map<Edge, int> message_cards;
    std::vector<std::vector<Rational>> kernels;

    /// Cardinality of the value travelling along parent -> child.
    int edge_card(int parent, int child) const;
    std::vector<int> input_cards(int node) const;
    std::vector<int> output_cards(int node) const;

    /// Throws ValidationError on any size, sign or normalization problem.
    void validate() const;
};

/// Exact product of per-node conditionals on an all-observed DAG.
/// Throws PreconditionError on unobserved nodes or missing/mismatched CPTs.
Distribution joint_from_markov(const GDag& dag, std::span<const Cpt> cpts);

/// Sums the kernel product over all latent messages; the result is over the
/// observed nodes in declaration order.
Distribution observed_from_classical_gmc(const ClassicalGmcModel& model);

/// Exact check of P(xyz)P(z) = P(xz)P(yz) at every outcome.
bool is_conditionally_independent(const Distribution& p, NodeSet x, NodeSet y, NodeSet z);

struct IndependenceReport {
    bool holds = true;
    /// Violated statements, over node indices of the graph.
    std::vector<CIStatement> violated;
};

/// Checks every observable d-separation of g against p. The variables of p
/// must be exactly the observed nodes of g (matched by id).
IndependenceReport satisfies_I(const GDag& g, const Distribution& p);

/// Shannon entropy in bits.
double entropy(const Distribution& p, NodeSet s);
double mutual_information(const Distribution& p, NodeSet s, NodeSet t);
double conditional_mutual_information(const Distribution& p, NodeSet s, NodeSet t, NodeSet u);

/// H(S) for every nonempty S, indexed by mask - 1.
std::vector<double> entropy_vector(const Distribution& p);

} // namespace gdag
