#include "gdag/dsep.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "gdag/error.hpp"

namespace gdag {

bool lex_less(NodeSet a, NodeSet b)
{
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
        if (*ia != *ib) {
            return *ia < *ib;
        }
    }
    return ia == a.end() && ib != b.end();
}

CIStatement CIStatement::canonical() const
{
    return lex_less(y, x) ? CIStatement{y, x, z} : *this;
}

bool statement_less(const CIStatement& a, const CIStatement& b)
{
    if (a.x != b.x) {
        return lex_less(a.x, b.x);
    }
    if (a.y != b.y) {
        return lex_less(a.y, b.y);
    }
    return lex_less(a.z, b.z);
}

CISet::CISet(std::vector<CIStatement> statements) : statements_(std::move(statements))
{
    for (auto& s : statements_) {
        s = s.canonical();
    }
    std::sort(statements_.begin(), statements_.end(), statement_less);
    statements_.erase(std::unique(statements_.begin(), statements_.end()), statements_.end());
}

bool CISet::contains(const CIStatement& s) const
{
    return std::binary_search(statements_.begin(), statements_.end(), s.canonical(), statement_less);
}

bool CISet::subset_of(const CISet& other) const
{
    return std::includes(other.statements_.begin(), other.statements_.end(), statements_.begin(),
                         statements_.end(), statement_less);
}

namespace {

void check_query(const GDag& g, NodeSet x, NodeSet y, NodeSet z)
{
    g.check_members(x | y | z);
    if (x.intersects(y) || x.intersects(z) || y.intersects(z)) {
        throw PreconditionError("x, y and z must be pairwise disjoint");
    }
}

} // namespace

namespace detail {

NodeSet ancestors_closure(std::span<const NodeSet> parents, NodeSet u)
{
    NodeSet result = u;
    NodeSet frontier = u;
    while (!frontier.empty()) {
        NodeSet next;
        for (int v : frontier) {
            next |= parents[static_cast<std::size_t>(v)];
        }
        frontier = next - result;
        result |= frontier;
    }
    return result;
}

NodeSet pseudo_reach(std::span<const NodeSet> parents, std::span<const NodeSet> children, NodeSet from,
                     NodeSet alive, NodeSet excluded)
{
    // a ~ b iff m(a) ∩ m(b) ⊄ W, with m(v) = {v} ∪ ch(v): b is a parent or
    // child of a, or they share a child outside W. Every alive node is
    // outside W by construction, so only the shared-child case needs the
    // explicit filter.
    const NodeSet walkable = alive - excluded;
    NodeSet seen = from & walkable;
    NodeSet frontier = seen;
    while (!frontier.empty()) {
        NodeSet next;
        for (int a : frontier) {
            const auto ua = static_cast<std::size_t>(a);
            next |= parents[ua] | children[ua];
            for (int c : children[ua] & alive) {
                next |= parents[static_cast<std::size_t>(c)];
            }
        }
        frontier = (next & walkable) - seen;
        seen |= frontier;
    }
    return seen;
}

bool d_separated_masks(std::span<const NodeSet> parents, std::span<const NodeSet> children, NodeSet x,
                       NodeSet y, NodeSet z)
{
    const NodeSet alive = ancestors_closure(parents, x | y | z);
    return !pseudo_reach(parents, children, x, alive, z).intersects(y);
}

TripleSpace::TripleSpace(std::vector<int> members)
{
    const std::size_t k = members.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        total *= 4;
    }
    for (std::size_t code = 0; code < total; ++code) {
        CIStatement s;
        std::size_t rest = code;
        for (std::size_t i = 0; i < k; ++i, rest /= 4) {
            switch (rest % 4) {
            case 1: s.x.insert(members[i]); break;
            case 2: s.y.insert(members[i]); break;
            case 3: s.z.insert(members[i]); break;
            default: break;
            }
        }
        if (!s.x.empty() && !s.y.empty() && lex_less(s.x, s.y)) {
            codes_.push_back(s);
        }
    }
}

std::vector<std::uint8_t> TripleSpace::dsep_flags(std::span<const NodeSet> parents,
                                                  std::span<const NodeSet> children) const
{
    std::vector<std::uint8_t> flags(codes_.size());
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        const auto& s = codes_[i];
        flags[i] = d_separated_masks(parents, children, s.x, s.y, s.z) ? 1 : 0;
    }
    return flags;
}

bool TripleSpace::dsep_subset_of(std::span<const NodeSet> parents, std::span<const NodeSet> children,
                                 const std::vector<std::uint8_t>& reference) const
{
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        if (reference[i] == 0) {
            const auto& s = codes_[i];
            if (d_separated_masks(parents, children, s.x, s.y, s.z)) {
                return false;
            }
        }
    }
    return true;
}

} // namespace detail

NodeSet exogenous_remainder(const GDag& g, NodeSet x, NodeSet y, NodeSet z)
{
    check_query(g, x, y, z);
    return g.all() - inclusive_ancestors(g, x | y | z);
}

bool d_separated(const GDag& g, NodeSet x, NodeSet y, NodeSet z)
{
    check_query(g, x, y, z);
    return detail::d_separated_masks(g.parent_sets(), g.child_sets(), x, y, z);
}

std::optional<DsepWitness> d_separated_via_partition(const GDag& g, NodeSet x, NodeSet y, NodeSet z)
{
    check_query(g, x, y, z);
    const NodeSet alive = inclusive_ancestors(g, x | y | z);
    const NodeSet u = detail::pseudo_reach(g.parent_sets(), g.child_sets(), x, alive, z);
    if (u.intersects(y)) {
        return std::nullopt;
    }
    const NodeSet w = g.all() - alive;
    return DsepWitness{u, alive - u - z, z, w};
}

CISet observable_ci_set(const GDag& g)
{
    const detail::TripleSpace space(g.observed().indices());
    const auto flags = space.dsep_flags(g.parent_sets(), g.child_sets());
    std::vector<CIStatement> out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i] != 0) {
            out.push_back(space.statement(i));
        }
    }
    return CISet(std::move(out));
}

bool ci_subset(const GDag& g_new, const GDag& g_old)
{
    auto observed_ids = [](const GDag& g) {
        auto ids = g.ids(g.observed());
        std::sort(ids.begin(), ids.end());
        return ids;
    };
    if (observed_ids(g_new) != observed_ids(g_old)) {
        throw PreconditionError("ci_subset requires identical observed node sets");
    }
    auto translate = [&](NodeSet s) {
        NodeSet out;
        for (int i : s) {
            out.insert(g_old.index_of(g_new.id(i)));
        }
        return out;
    };
    const CISet old_set = observable_ci_set(g_old);
    for (const auto& s : observable_ci_set(g_new)) {
        if (!old_set.contains(CIStatement{translate(s.x), translate(s.y), translate(s.z)})) {
            return false;
        }
    }
    return true;
}

} // namespace gdag
