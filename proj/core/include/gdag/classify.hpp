#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdag/graph.hpp"

namespace gdag {

enum class TransformKind {
    remove_edge,
    remove_isolated_unobserved,
    add_edge_unobserved_path,
    add_edge_parent_subset,
};

std::string_view to_string(TransformKind kind);
/// Throws ParseError.
TransformKind parse_transform_kind(std::string_view text);

/// One C-preserving graph edit, naming nodes by id so that steps stay valid
/// across the re-indexing caused by node removal. `b` is unused for
/// remove_isolated_unobserved.
struct Transformation {
    TransformKind kind = TransformKind::remove_edge;
    std::string a;
    std::string b;

    friend bool operator==(const Transformation&, const Transformation&) = default;
};

/// Throws PreconditionError naming the failed clause, or UnknownNodeError.
GDag apply_transformation(const GDag& g, const Transformation& t);

struct Certificate {
    GDag source;
    std::vector<Transformation> steps;
    GDag final;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

/// Applies the steps to the source in order.
GDag replay(const Certificate& c);

/// Replay reproduces `final`, `final` is all-observed, and it has no
/// observable independence the source lacks.
bool verify_certificate(const Certificate& c);

/// The branch search for the sufficient condition of C = I. The first
/// successful branch (orderings of T in lexicographic order, then latent
/// assignments in index order) is returned as a replayable certificate.
std::optional<Certificate> sufficient_condition_holds(const GDag& g);

/// Mask-level verdict of the same search without building a certificate.
bool sufficient_condition_test(const GDag& g);

enum class ReductionKind {
    drop_disconnected_component,
    drop_childless_unobserved,
    merge_unobserved_into_unobserved_parent,
    drop_one_outcome_observed,
    drop_redundant_observed_edge,
    absorb_dominated_unobserved,
    merge_unobserved_into_sole_child,
    merge_observed_into_parentless_unobserved_parent,
};

inline constexpr int reduction_kind_count = 8;

std::string_view to_string(ReductionKind kind);

/// The last two rules are only valid for theories able to transmit finite
/// classical information perfectly (classical and quantum theory included).
bool assumes_classical_transmission(ReductionKind kind);

/// `node` is the rule's subject: a member of the dropped component, the
/// removed or merged node, or the child end of a dropped edge. `other` is the
/// dropped edge's parent, or the dominating node for absorption.
struct ReductionRule {
    ReductionKind kind = ReductionKind::drop_childless_unobserved;
    std::string node;
    std::string other;

    friend bool operator==(const ReductionRule&, const ReductionRule&) = default;
};

/// Throws PreconditionError naming the failed clause, or UnknownNodeError.
GDag apply_reduction(const GDag& g, const ReductionRule& r);

/// Every applicable rule instance, in priority order (rule order, then
/// lowest node index, then lowest second index).
std::vector<ReductionRule> applicable_reductions(const GDag& g);

/// Repeatedly applies the first applicable rule until none applies.
///
/// Rules that drop observed content (components, one-outcome nodes and
/// redundant edges) only fire when the graph fails the sufficient condition
/// both before and after; they exist to shrink a hard graph to a smaller
/// hard one, not to erase it.
GDag reduce(const GDag& g);

/// Like reduce, but trying rules in the given order of kinds.
GDag reduce_with_priority(const GDag& g, const std::vector<ReductionKind>& priority);

/// g fails the sufficient condition and no single rule instance turns it
/// into a smaller graph that still fails.
bool irreducible_failure(const GDag& g);

} // namespace gdag
