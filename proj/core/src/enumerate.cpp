#include "gdag/enumerate.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_set>

#include "gdag/classify.hpp"
#include "gdag/error.hpp"

namespace gdag {

namespace {

std::uint64_t encode(const GDag& g, const std::vector<int>& order)
{
    const int n = g.size();
    std::uint64_t code = 0;
    for (int i = 0; i < n; ++i) {
        code = (code << 1) | (g.is_observed(order[static_cast<std::size_t>(i)]) ? 0U : 1U);
    }
    for (int i = 0; i < n; ++i) {
        const NodeSet ch = g.children(order[static_cast<std::size_t>(i)]);
        for (int j = 0; j < n; ++j) {
            code = (code << 1) | (ch.contains(order[static_cast<std::size_t>(j)]) ? 1U : 0U);
        }
    }
    return code;
}

std::string node_name(int i)
{
    return std::string(1, static_cast<char>('A' + i));
}

} // namespace

std::string CanonicalForm::to_string() const
{
    std::string out;
    const int bits = n + n * n;
    for (int i = 0; i < n; ++i) {
        out += ((code >> (bits - 1 - i)) & 1U) ? 'u' : 'o';
    }
    for (int i = 0; i < n; ++i) {
        out += i == 0 ? ':' : '/';
        for (int j = 0; j < n; ++j) {
            out += ((code >> (n * n - 1 - (i * n + j))) & 1U) ? '1' : '0';
        }
    }
    return out;
}

CanonicalForm canonical_form(const GDag& g)
{
    const int n = g.size();
    if (n > max_enumeration_nodes) {
        throw PreconditionError("canonical forms are limited to " + std::to_string(max_enumeration_nodes) + " nodes");
    }
    // Partition nodes into cells of equal invariants, ordered by invariant.
    using Key = std::tuple<int, int, int, int, int>;
    std::vector<std::pair<Key, int>> keyed;
    for (int v = 0; v < n; ++v) {
        int parent_out = 0;
        int child_in = 0;
        for (int p : g.parents(v)) {
            parent_out += g.children(p).size();
        }
        for (int c : g.children(v)) {
            child_in += g.parents(c).size();
        }
        keyed.push_back({{g.is_observed(v) ? 0 : 1, g.parents(v).size(), g.children(v).size(), parent_out, child_in},
                         v});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<int>> cells;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) {
            cells.emplace_back();
        }
        cells.back().push_back(keyed[i].second);
    }
    std::uint64_t best = ~std::uint64_t{0};
    std::vector<int> order;
    for (;;) {
        order.clear();
        for (const auto& c : cells) {
            order.insert(order.end(), c.begin(), c.end());
        }
        best = std::min(best, encode(g, order));
        std::size_t i = cells.size();
        bool carry = true;
        while (carry && i-- > 0) {
            carry = !std::next_permutation(cells[i].begin(), cells[i].end());
        }
        if (carry) {
            break;
        }
    }
    return {n, n == 0 ? 0 : best};
}

GDag from_canonical_form(const CanonicalForm& form)
{
    const int n = form.n;
    std::vector<Node> nodes;
    const int bits = n + n * n;
    for (int i = 0; i < n; ++i) {
        const bool unobserved = (form.code >> (bits - 1 - i)) & 1U;
        nodes.push_back({"N" + std::to_string(i), unobserved ? NodeKind::unobserved : NodeKind::observed});
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if ((form.code >> (n * n - 1 - (i * n + j))) & 1U) {
                edges.emplace_back(i, j);
            }
        }
    }
    return GDag::from_indices(std::move(nodes), std::move(edges));
}

void for_each_gdag(int n, const std::function<void(const GDag&)>& visit)
{
    if (n < 1 || n > max_enumeration_nodes) {
        throw PreconditionError("enumeration needs 1 <= n <= " + std::to_string(max_enumeration_nodes));
    }
    std::vector<Edge> pairs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            pairs.emplace_back(i, j);
        }
    }
    std::unordered_set<std::uint64_t> seen;
    for (std::uint32_t kinds = 0; kinds < (1U << n); ++kinds) {
        std::vector<Node> nodes;
        for (int i = 0; i < n; ++i) {
            nodes.push_back({node_name(i), ((kinds >> i) & 1U) ? NodeKind::unobserved : NodeKind::observed});
        }
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs.size()); ++bits) {
            std::vector<Edge> edges;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                if ((bits >> k) & 1U) {
                    edges.push_back(pairs[k]);
                }
            }
            std::sort(edges.begin(), edges.end());
            GDag g = GDag::from_indices(nodes, std::move(edges));
            if (seen.insert(canonical_form(g).code).second) {
                visit(g);
            }
        }
    }
}

std::vector<GDag> enumerate_gdags(int n)
{
    std::vector<GDag> out;
    for_each_gdag(n, [&](const GDag& g) { out.push_back(g); });
    return out;
}

CensusReport classification_census(int n, const CensusOptions& options)
{
    if (n < 1 || n > max_enumeration_nodes) {
        throw PreconditionError("census needs 1 <= n <= " + std::to_string(max_enumeration_nodes));
    }
    if (n >= 6 && !options.long_run) {
        throw PreconditionError("census for n >= 6 requires the long-run flag");
    }
    CensusReport report{n, 0, 0, 0};
    for_each_gdag(n, [&](const GDag& g) {
        ++report.total;
        if (sufficient_condition_test(g)) {
            ++report.condition_holds;
        } else if (irreducible_failure(g)) {
            ++report.survivors;
            if (options.on_survivor) {
                options.on_survivor(g);
            }
        }
    });
    return report;
}

std::string to_csv_row(const CensusReport& r)
{
    return std::to_string(r.n) + "," + std::to_string(r.total) + "," + std::to_string(r.condition_holds) + "," +
           std::to_string(r.survivors);
}

} // namespace gdag
