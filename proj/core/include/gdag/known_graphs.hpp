#pragma once

#include "gdag/graph.hpp"

namespace gdag::graphs {

/// X -> A <- Λ -> B <- Y with Λ unobserved.
GDag bell();

/// X -> A <- Λ -> B: only one party has a setting.
GDag one_sided_bell();

/// A, B, C observed; each pair shares its own unobserved source.
GDag triangle();

/// Y -> B -> A with an unobserved U feeding both A and B.
GDag instrumental();

/// Observed A, B, D, F; unobserved E, H, C, J. ({A,D} ⟂ {F}) holds with
/// U = {A,D,E,H}, V = {F,J}, W = {B,C}.
GDag separation_example();

/// All-observed three-node graphs.
GDag chain();    // X -> Z -> Y
GDag fork();     // X <- Z -> Y
GDag collider(); // X -> Z <- Y

} // namespace gdag::graphs
