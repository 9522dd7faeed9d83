#pragma once

#include <random>
#include <vector>

#include "gdag/entropy_cone.hpp"
#include "gdag/graph.hpp"
#include "gdag/models.hpp"

namespace gdag::testkit {

using Rng = std::mt19937_64;

/// Random GDAG: kinds drawn with `p_unobserved`, edges with `p_edge` along a
/// random hidden order, so declaration order is not topological. Ids N0, N1, ...
GDag random_gdag(Rng& rng, int n, double p_unobserved = 0.35, double p_edge = 0.45);

/// Same, but all nodes observed.
GDag random_dag(Rng& rng, int n, double p_edge = 0.45);

/// Random distribution over `cards` entries with small integer weights
/// (about half the time a point mass per slice).
std::vector<Rational> random_simplex(Rng& rng, std::size_t size);
std::vector<Rational> random_kernel(Rng& rng, std::size_t rows, std::size_t width, bool allow_deterministic = true);

/// Classical model with observed cardinalities and message cardinalities in [1, max_card].
ClassicalGmcModel random_classical_model(Rng& rng, const GDag& g, int max_card, int min_card = 1);

/// Model with every observed cardinality and message cardinality fixed.
ClassicalGmcModel random_classical_model_fixed(Rng& rng, const GDag& g, int card, int message_card);

/// One random CPT per node of an all-observed DAG.
std::vector<Cpt> random_cpts(Rng& rng, const GDag& dag, const std::vector<int>& cards);

/// Graph node set re-expressed as variable indices of p, matched by id.
NodeSet as_variables(const GDag& g, const Distribution& p, NodeSet nodes);

/// Textbook d-separation: every simple undirected path from x to y is
/// blocked by a non-collider in z or a collider outside An(z).
bool path_blocking_dsep(const GDag& g, NodeSet x, NodeSet y, NodeSet z);

/// All pairwise disjoint (x, y, z) over `members` with x, y nonempty
/// (both orientations).
std::vector<CIStatement> all_triples(NodeSet members);

/// Exact value of a row at a point indexed by mask - 1.
Rational evaluate_exact(const LinIneq& row, const std::vector<Rational>& point);

/// Brute-force projection oracle: is there a value of `coord` that makes
/// every row hold at `point` (whose own `coord` entry is ignored)?
bool extends_along(const std::vector<LinIneq>& rows, std::vector<Rational> point, SubsetMask coord);

/// No row is implied by the remaining ones.
bool irredundant(const Cone& c);

/// P(rest | given) from a joint whose given-marginal has full support.
/// Variables keep their relative order in both lists.
ConditionalTable conditional_on(const Distribution& joint, const std::vector<std::string>& given);

/// Classical model on the instrumental GDAG with a uniform instrument, as
/// the family P(a, b | y).
ConditionalTable random_instrumental_family(Rng& rng, int max_card, int latent_card);

/// Observed distribution of a random classical triangle model.
Distribution random_triangle_distribution(Rng& rng, int max_latent_card);

} // namespace gdag::testkit
