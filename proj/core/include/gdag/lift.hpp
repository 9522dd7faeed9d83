#pragma once

#include "gdag/classify.hpp"
#include "gdag/models.hpp"

namespace gdag {

/// Turns a classical model on H = apply_transformation(g, t) into a model
/// on g with the same observed distribution, following the functional
/// constructions that show each transformation can only shrink C:
///
///   remove_edge                 the kernel ignores the restored input
///   remove_isolated_unobserved  the restored node does nothing
///   add_edge_unobserved_path    messages along a latent path carry a copy
///                               of the value that travelled on the new edge
///   add_edge_parent_subset      an unobserved parent of the tail samples its
///                               response table and shares it with the head
///
/// Throws PreconditionError if the model is not defined on H, or if the
/// response table of add_edge_parent_subset would exceed 2^20 entries.
ClassicalGmcModel lift_model(const GDag& g, const Transformation& t, const ClassicalGmcModel& on_h);

} // namespace gdag
