#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gdag/graph.hpp"

namespace gdag {

/// Kind vector plus adjacency matrix of the lexicographically smallest
/// kind-preserving relabeling, packed as bits (observed sorts first).
struct CanonicalForm {
    int n = 0;
    std::uint64_t code = 0;

    /// Printable form: "<kinds>:<adjacency rows>" using o/u and 0/1.
    std::string to_string() const;

    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
    friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

inline constexpr int max_enumeration_nodes = 7;

/// Throws PreconditionError for graphs larger than max_enumeration_nodes.
CanonicalForm canonical_form(const GDag& g);

/// The graph with nodes renamed N0.. in canonical order.
GDag from_canonical_form(const CanonicalForm& form);

/// One representative per isomorphism class, nodes named A, B, C, ... in a
/// topological order. Throws PreconditionError unless 1 <= n <= 7.
void for_each_gdag(int n, const std::function<void(const GDag&)>& visit);
std::vector<GDag> enumerate_gdags(int n);

struct CensusReport {
    int n = 0;
    std::uint64_t total = 0;
    std::uint64_t condition_holds = 0;
    std::uint64_t survivors = 0;

    friend bool operator==(const CensusReport&, const CensusReport&) = default;
};

struct CensusOptions {
    /// Required for n >= 6.
    bool long_run = false;
    /// Receives every irreducible failing graph.
    std::function<void(const GDag&)> on_survivor;
};

/// Runs the sufficient-condition search on every graph of size n and counts
/// the failures that do not reduce to a smaller failing graph.
/// Throws PreconditionError for n out of range or n >= 6 without long_run.
CensusReport classification_census(int n, const CensusOptions& options = {});

/// "n,total,condition_holds,survivors"
std::string to_csv_row(const CensusReport& r);
inline constexpr const char* census_csv_header = "n,total,condition_holds,survivors";

} // namespace gdag
