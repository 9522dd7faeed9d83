#pragma once

#include "gdag/models.hpp"
#include "gdag/rational.hpp"

namespace gdag {

/// I(A:B) + I(B:C) - H(B) in bits for a distribution over exactly {A, B, C}
/// (any order). Positive values rule out every theory on the triangle.
/// Throws PreconditionError on other variable sets.
double triangle_monogamy_margin(const Distribution& p);

/// Whether some P'(a,b,c) has P'(a,b) = P(a,b), P'(b,c) = P(b,c) and
/// P'(a,c) = P(a)P(c). Decided exactly; false rules out every theory.
bool triangle_gpt_feasible(const Distribution& p);

/// max_b sum_a max_y P(a,b|y) for a table over {A, B} given {Y}. Values
/// above 1 rule out every theory on the instrumental graph.
/// Throws PreconditionError on other variable sets.
Rational instrumental_value(const ConditionalTable& p);

} // namespace gdag
