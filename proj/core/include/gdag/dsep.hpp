#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gdag/graph.hpp"

namespace gdag {

/// (x ⟂ y | z) over node indices of one graph.
///
/// CISet stores statements in canonical orientation: the sorted index list
/// of x is lexicographically smaller than that of y.
struct CIStatement {
    NodeSet x;
    NodeSet y;
    NodeSet z;

    /// Swaps x and y if needed so that the statement is canonically oriented.
    CIStatement canonical() const;

    friend bool operator==(const CIStatement&, const CIStatement&) = default;
};

/// Lexicographic comparison of the ascending index lists of two sets.
bool lex_less(NodeSet a, NodeSet b);

/// Total order used for byte-stable output: by x, then y, then z (each lex).
bool statement_less(const CIStatement& a, const CIStatement& b);

class CISet {
public:
    CISet() = default;

    /// Canonicalizes, sorts and deduplicates.
    explicit CISet(std::vector<CIStatement> statements);

    bool contains(const CIStatement& s) const;
    bool subset_of(const CISet& other) const;
    std::size_t size() const { return statements_.size(); }
    bool empty() const { return statements_.empty(); }

    const std::vector<CIStatement>& statements() const { return statements_; }
    auto begin() const { return statements_.begin(); }
    auto end() const { return statements_.end(); }

    friend bool operator==(const CISet&, const CISet&) = default;

private:
    std::vector<CIStatement> statements_;
};

/// The four-block partition certifying a d-separation.
struct DsepWitness {
    NodeSet u;
    NodeSet v;
    NodeSet z;
    NodeSet w;
};

/// W = nodes(g) \ An(x ∪ y ∪ z). Throws PreconditionError on overlapping inputs.
NodeSet exogenous_remainder(const GDag& g, NodeSet x, NodeSet y, NodeSet z);

/// True iff every pseudo-path from x to y meets z.
///
/// Pseudo-paths avoid W and step between nodes that are adjacent or share a
/// child outside W; the check is reachability in that relation once z is
/// deleted. Throws PreconditionError on overlapping or foreign inputs.
bool d_separated(const GDag& g, NodeSet x, NodeSet y, NodeSet z);

/// The partition form: returns {U, V, z, W} with x ⊆ U, y ⊆ V and
/// ch(U) ∩ ch(V) ⊆ W when x and y are d-separated by z, else nothing.
std::optional<DsepWitness> d_separated_via_partition(const GDag& g, NodeSet x, NodeSet y, NodeSet z);

/// Every d-separation statement among disjoint observed subsets (x, y nonempty).
CISet observable_ci_set(const GDag& g);

/// observable_ci_set(g_new) ⊆ observable_ci_set(g_old), matching nodes by id.
/// Throws PreconditionError if the observed id sets differ.
bool ci_subset(const GDag& g_new, const GDag& g_old);

namespace detail {

/// Mask-level kernels shared by the classification search. Graphs are given
/// as parent/child mask arrays of length n.
NodeSet ancestors_closure(std::span<const NodeSet> parents, NodeSet u);
NodeSet pseudo_reach(std::span<const NodeSet> parents, std::span<const NodeSet> children, NodeSet from,
                     NodeSet alive, NodeSet excluded);
bool d_separated_masks(std::span<const NodeSet> parents, std::span<const NodeSet> children, NodeSet x,
                       NodeSet y, NodeSet z);

/// Enumerates canonically oriented (x, y, z) triples over a fixed list of
/// nodes by base-4 digit codes (0 = absent, 1 = x, 2 = y, 3 = z).
class TripleSpace {
public:
    explicit TripleSpace(std::vector<int> members);

    std::size_t code_count() const { return codes_.size(); }
    const CIStatement& statement(std::size_t i) const { return codes_[i]; }

    /// One flag per canonical triple: does the graph d-separate it?
    std::vector<std::uint8_t> dsep_flags(std::span<const NodeSet> parents, std::span<const NodeSet> children) const;

    /// True iff every triple d-separated in the graph is flagged in `reference`.
    bool dsep_subset_of(std::span<const NodeSet> parents, std::span<const NodeSet> children,
                        const std::vector<std::uint8_t>& reference) const;

private:
    std::vector<CIStatement> codes_;
};

} // namespace detail

} // namespace gdag
