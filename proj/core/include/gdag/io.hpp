#pragma once

#include <string>
#include <string_view>

#include "gdag/classify.hpp"
#include "gdag/dsep.hpp"
#include "gdag/entropy_cone.hpp"
#include "gdag/graph.hpp"
#include "gdag/models.hpp"

namespace gdag {

// JSON readers throw ParseError on malformed text or wrong field types and
// ValidationError / UnknownNodeError on structurally invalid content.
// Writers emit compact JSON with fields and rows in a fixed order.

GDag parse_gdag(std::string_view text);
std::string serialize(const GDag& g);

/// Statements over `g`'s node ids.
CISet parse_ci_set(const GDag& g, std::string_view text);
std::string serialize(const GDag& g, const CISet& s);
std::string serialize(const GDag& g, const CIStatement& s);

Distribution parse_distribution(std::string_view text);
std::string serialize(const Distribution& p);

ConditionalTable parse_conditional_table(std::string_view text);
std::string serialize(const ConditionalTable& t);

Cone parse_cone(std::string_view text);
std::string serialize(const Cone& c);

Certificate parse_certificate(std::string_view text);
std::string serialize(const Certificate& c);

/// Reads a whole file; throws ParseError if it cannot be opened.
std::string read_file(const std::string& path);

} // namespace gdag
