#include "gdag/classify.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "gdag/dsep.hpp"
#include "gdag/error.hpp"

namespace gdag {

namespace {

constexpr std::array<std::string_view, 4> transform_names = {
    "remove_edge",
    "remove_isolated_unobserved",
    "add_edge_unobserved_path",
    "add_edge_parent_subset",
};

constexpr std::array<std::string_view, reduction_kind_count> reduction_names = {
    "drop_disconnected_component",
    "drop_childless_unobserved",
    "merge_unobserved_into_unobserved_parent",
    "drop_one_outcome_observed",
    "drop_redundant_observed_edge",
    "absorb_dominated_unobserved",
    "merge_unobserved_into_sole_child",
    "merge_observed_into_parentless_unobserved_parent",
};

std::vector<NodeSet> children_of(std::span<const NodeSet> parents)
{
    std::vector<NodeSet> ch(parents.size());
    for (std::size_t v = 0; v < parents.size(); ++v) {
        for (int p : parents[v]) {
            ch[static_cast<std::size_t>(p)].insert(static_cast<int>(v));
        }
    }
    return ch;
}

/// One branch of the search: an ordering of the tricky nodes and, per
/// position, the chosen parentless latent node.
struct Branch {
    std::vector<int> order;
    std::vector<int> latent;
};

class Search {
public:
    explicit Search(const GDag& g)
        : n_(g.size()), unobs_(g.unobserved()), triples_(g.observed().indices())
    {
        for (int v : g.observed()) {
            if (g.parents(v).intersects(unobs_)) {
                tricky_.push_back(v);
            }
        }
        for (int v : unobs_) {
            if (!g.parents(v).intersects(unobs_)) {
                roots_.insert(v);
            }
        }
        reach_.resize(static_cast<std::size_t>(n_));
        base_.assign(g.parent_sets().begin(), g.parent_sets().end());
        for (int x = 0; x < n_; ++x) {
            reach_[static_cast<std::size_t>(x)] = unobserved_path_reach(g, x);
            for (int y : reach_[static_cast<std::size_t>(x)]) {
                base_[static_cast<std::size_t>(y)].insert(x);
            }
        }
        reference_ = triples_.dsep_flags(g.parent_sets(), g.child_sets());
    }

    std::optional<Branch> run()
    {
        std::vector<int> order = tricky_;
        std::set<std::vector<NodeSet>> failed;
        do {
            std::vector<std::vector<int>> choices;
            bool empty_choice = false;
            for (int t : order) {
                std::vector<int> c;
                for (int r : roots_) {
                    if (reach_[static_cast<std::size_t>(r)].contains(t)) {
                        c.push_back(r);
                    }
                }
                empty_choice = empty_choice || c.empty();
                choices.push_back(std::move(c));
            }
            if (empty_choice) {
                continue;
            }
            std::vector<std::size_t> digit(order.size(), 0);
            for (;;) {
                Branch b{order, {}};
                for (std::size_t i = 0; i < order.size(); ++i) {
                    b.latent.push_back(choices[i][digit[i]]);
                }
                auto final_parents = run_branch(b);
                if (!failed.contains(final_parents)) {
                    const auto ch = children_of(final_parents);
                    if (triples_.dsep_subset_of(final_parents, ch, reference_)) {
                        return b;
                    }
                    failed.insert(std::move(final_parents));
                }
                bool carry = true;
                for (std::size_t i = order.size(); carry && i-- > 0;) {
                    if (++digit[i] < choices[i].size()) {
                        carry = false;
                    } else {
                        digit[i] = 0;
                    }
                }
                if (carry) {
                    break;
                }
            }
        } while (std::next_permutation(order.begin(), order.end()));
        return std::nullopt;
    }

    std::vector<NodeSet> run_branch(const Branch& b) const
    {
        auto p = base_;
        const std::size_t k = b.order.size();
        for (std::size_t i = 0; i < k; ++i) {
            auto& pt = p[static_cast<std::size_t>(b.order[i])];
            for (std::size_t j = i + 1; j < k; ++j) {
                pt.erase(b.order[j]);
            }
            pt -= unobs_ - NodeSet::single(b.latent[i]);
            if (pt.intersects(unobs_)) {
                for (std::size_t j = i + 1; j < k; ++j) {
                    auto& pj = p[static_cast<std::size_t>(b.order[j])];
                    if (pt.subset_of(pj)) {
                        pj.insert(b.order[i]);
                    }
                }
            }
        }
        for (int v = 0; v < n_; ++v) {
            auto& pv = p[static_cast<std::size_t>(v)];
            pv = unobs_.contains(v) ? NodeSet() : pv - unobs_;
        }
        return p;
    }

    const std::vector<NodeSet>& base() const { return base_; }
    NodeSet reach(int v) const { return reach_[static_cast<std::size_t>(v)]; }

private:
    int n_;
    NodeSet unobs_;
    std::vector<int> tricky_;
    NodeSet roots_;
    std::vector<NodeSet> reach_;
    std::vector<NodeSet> base_;
    detail::TripleSpace triples_;
    std::vector<std::uint8_t> reference_;
};

Certificate build_certificate(const GDag& g, const Search& search, const Branch& b)
{
    Certificate c{g, {}, g};
    GDag cur = g;
    auto step = [&](TransformKind kind, int a, int b_node) {
        Transformation t{kind, cur.id(a), b_node < 0 ? std::string() : cur.id(b_node)};
        cur = apply_transformation(cur, t);
        c.steps.push_back(std::move(t));
    };
    const NodeSet unobs = g.unobserved();
    for (int x = 0; x < g.size(); ++x) {
        for (int y : search.reach(x)) {
            if (!cur.has_edge(x, y)) {
                step(TransformKind::add_edge_unobserved_path, x, y);
            }
        }
    }
    const std::size_t k = b.order.size();
    for (std::size_t i = 0; i < k; ++i) {
        const int t = b.order[i];
        for (std::size_t j = i + 1; j < k; ++j) {
            if (cur.has_edge(b.order[j], t)) {
                step(TransformKind::remove_edge, b.order[j], t);
            }
        }
        for (int u : unobs - NodeSet::single(b.latent[i])) {
            if (cur.has_edge(u, t)) {
                step(TransformKind::remove_edge, u, t);
            }
        }
        const NodeSet pt = cur.parents(t);
        if (!pt.intersects(unobs)) {
            continue;
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            const int tj = b.order[j];
            if (pt.subset_of(cur.parents(tj)) && !cur.has_edge(t, tj)) {
                step(TransformKind::add_edge_parent_subset, t, tj);
            }
        }
    }
    const auto edges = cur.edges();
    for (const auto& [p, ch] : edges) {
        if (unobs.contains(p) || unobs.contains(ch)) {
            step(TransformKind::remove_edge, p, ch);
        }
    }
    for (const auto& id : g.ids(unobs)) {
        step(TransformKind::remove_isolated_unobserved, cur.index_of(id), -1);
    }
    c.final = cur;
    return c;
}

[[noreturn]] void fail(const std::string& what)
{
    throw PreconditionError(what);
}

NodeSet component_of(const GDag& g, int v)
{
    NodeSet seen = NodeSet::single(v);
    NodeSet frontier = seen;
    while (!frontier.empty()) {
        NodeSet next;
        for (int u : frontier) {
            next |= g.parents(u) | g.children(u);
        }
        frontier = next - seen;
        seen |= next;
    }
    return seen;
}

bool guarded(ReductionKind kind)
{
    return kind == ReductionKind::drop_disconnected_component || kind == ReductionKind::drop_one_outcome_observed ||
           kind == ReductionKind::drop_redundant_observed_edge;
}

} // namespace

std::string_view to_string(TransformKind kind)
{
    return transform_names[static_cast<std::size_t>(kind)];
}

TransformKind parse_transform_kind(std::string_view text)
{
    for (std::size_t i = 0; i < transform_names.size(); ++i) {
        if (transform_names[i] == text) {
            return static_cast<TransformKind>(i);
        }
    }
    throw ParseError("unknown transformation '" + std::string(text) + "'");
}

GDag apply_transformation(const GDag& g, const Transformation& t)
{
    const int a = g.index_of(t.a);
    if (t.kind == TransformKind::remove_isolated_unobserved) {
        if (g.is_observed(a)) {
            fail("remove_isolated_unobserved: node " + t.a + " is observed");
        }
        if (!g.parents(a).empty() || !g.children(a).empty()) {
            fail("remove_isolated_unobserved: node " + t.a + " still has edges");
        }
        return g.without_nodes(NodeSet::single(a));
    }
    const int b = g.index_of(t.b);
    const std::string edge = t.a + "->" + t.b;
    switch (t.kind) {
    case TransformKind::remove_edge:
        if (!g.has_edge(a, b)) {
            fail("remove_edge: edge " + edge + " does not exist");
        }
        return g.without_edge(a, b);
    case TransformKind::add_edge_unobserved_path:
        if (g.has_edge(a, b)) {
            fail("add_edge_unobserved_path: edge " + edge + " already exists");
        }
        if (!unobserved_path_reach(g, a).contains(b)) {
            fail("add_edge_unobserved_path: no directed path " + edge + " through unobserved nodes only");
        }
        return g.with_edge(a, b);
    case TransformKind::add_edge_parent_subset: {
        if (a == b) {
            fail("add_edge_parent_subset: self-loop");
        }
        if (g.has_edge(a, b)) {
            fail("add_edge_parent_subset: edge " + edge + " already exists");
        }
        if (!g.parents(a).subset_of(g.parents(b))) {
            fail("add_edge_parent_subset: parents of " + t.a + " are not a subset of the parents of " + t.b);
        }
        if (!g.parents(a).intersects(g.unobserved())) {
            fail("add_edge_parent_subset: parents of " + t.a + " contain no unobserved node");
        }
        if (descendants(g, b).contains(a)) {
            fail("add_edge_parent_subset: edge " + edge + " would create a cycle");
        }
        return g.with_edge(a, b);
    }
    case TransformKind::remove_isolated_unobserved:
        break;
    }
    fail("unknown transformation");
}

GDag replay(const Certificate& c)
{
    GDag g = c.source;
    for (const auto& t : c.steps) {
        g = apply_transformation(g, t);
    }
    return g;
}

bool verify_certificate(const Certificate& c)
{
    try {
        const GDag out = replay(c);
        return out == c.final && c.final.unobserved().empty() && ci_subset(c.final, c.source);
    } catch (const std::exception&) {
        return false;
    }
}

std::optional<Certificate> sufficient_condition_holds(const GDag& g)
{
    Search search(g);
    auto branch = search.run();
    if (!branch) {
        return std::nullopt;
    }
    return build_certificate(g, search, *branch);
}

bool sufficient_condition_test(const GDag& g)
{
    return Search(g).run().has_value();
}

std::string_view to_string(ReductionKind kind)
{
    return reduction_names[static_cast<std::size_t>(kind)];
}

bool assumes_classical_transmission(ReductionKind kind)
{
    return kind == ReductionKind::merge_unobserved_into_sole_child ||
           kind == ReductionKind::merge_observed_into_parentless_unobserved_parent;
}

GDag apply_reduction(const GDag& g, const ReductionRule& r)
{
    const int v = g.index_of(r.node);
    const NodeSet unobs = g.unobserved();
    const std::string name(to_string(r.kind));
    switch (r.kind) {
    case ReductionKind::drop_disconnected_component: {
        const NodeSet comp = component_of(g, v);
        if (comp == g.all()) {
            fail(name + ": the graph is connected");
        }
        return g.without_nodes(comp);
    }
    case ReductionKind::drop_childless_unobserved:
        if (g.is_observed(v)) {
            fail(name + ": " + r.node + " is observed");
        }
        if (!g.children(v).empty()) {
            fail(name + ": " + r.node + " has children");
        }
        return g.without_nodes(NodeSet::single(v));
    case ReductionKind::merge_unobserved_into_unobserved_parent: {
        if (g.is_observed(v)) {
            fail(name + ": " + r.node + " is observed");
        }
        const NodeSet pa = g.parents(v);
        if (pa.size() != 1 || g.is_observed(pa.front())) {
            fail(name + ": " + r.node + " does not have exactly one parent, unobserved");
        }
        GDag h = g;
        for (int c : g.children(v)) {
            if (!h.has_edge(pa.front(), c)) {
                h = h.with_edge(pa.front(), c);
            }
        }
        return h.without_nodes(NodeSet::single(v));
    }
    case ReductionKind::drop_one_outcome_observed:
        if (!g.is_observed(v)) {
            fail(name + ": " + r.node + " is unobserved");
        }
        return g.without_nodes(NodeSet::single(v));
    case ReductionKind::drop_redundant_observed_edge: {
        const int p = g.index_of(r.other);
        if (!g.is_observed(v)) {
            fail(name + ": " + r.node + " is unobserved");
        }
        if (g.parents(v).intersects(unobs)) {
            fail(name + ": " + r.node + " has an unobserved parent");
        }
        if (!g.has_edge(p, v)) {
            fail(name + ": edge " + r.other + "->" + r.node + " does not exist");
        }
        GDag h = g.without_edge(p, v);
        if (!ci_subset(h, g)) {
            fail(name + ": removing " + r.other + "->" + r.node + " creates a new independence");
        }
        return h;
    }
    case ReductionKind::absorb_dominated_unobserved: {
        const int o = g.index_of(r.other);
        if (v == o) {
            fail(name + ": a node cannot absorb itself");
        }
        if (g.is_observed(v) || g.is_observed(o)) {
            fail(name + ": both nodes must be unobserved");
        }
        if (!g.parents(v).subset_of(g.parents(o)) || !g.children(v).subset_of(g.children(o))) {
            fail(name + ": " + r.node + " is not dominated by " + r.other);
        }
        return g.without_nodes(NodeSet::single(v));
    }
    case ReductionKind::merge_unobserved_into_sole_child: {
        if (g.is_observed(v)) {
            fail(name + ": " + r.node + " is observed");
        }
        const NodeSet ch = g.children(v);
        if (ch.size() != 1) {
            fail(name + ": " + r.node + " does not have exactly one child");
        }
        GDag h = g;
        for (int p : g.parents(v)) {
            if (!h.has_edge(p, ch.front())) {
                h = h.with_edge(p, ch.front());
            }
        }
        return h.without_nodes(NodeSet::single(v));
    }
    case ReductionKind::merge_observed_into_parentless_unobserved_parent: {
        if (!g.is_observed(v)) {
            fail(name + ": " + r.node + " is unobserved");
        }
        const NodeSet pa = g.parents(v);
        if (pa.size() != 1 || g.is_observed(pa.front())) {
            fail(name + ": " + r.node + " does not have a single, unobserved parent");
        }
        const int x = pa.front();
        if (!g.parents(x).empty()) {
            fail(name + ": parent " + g.id(x) + " has parents");
        }
        const NodeSet siblings = g.children(x) - NodeSet::single(v);
        if (siblings.size() != 1) {
            fail(name + ": " + r.node + " does not have exactly one sibling");
        }
        GDag h = g;
        if (!h.has_edge(v, siblings.front())) {
            h = h.with_edge(v, siblings.front());
        }
        return h.without_nodes(NodeSet::single(x));
    }
    }
    fail("unknown reduction");
}

std::vector<ReductionRule> applicable_reductions(const GDag& g)
{
    std::vector<ReductionRule> out;
    const int n = g.size();
    const NodeSet unobs = g.unobserved();
    auto add = [&](ReductionKind k, int v, int o = -1) {
        out.push_back({k, g.id(v), o < 0 ? std::string() : g.id(o)});
    };

    NodeSet covered;
    for (int v = 0; v < n; ++v) {
        if (covered.contains(v)) {
            continue;
        }
        const NodeSet comp = component_of(g, v);
        covered |= comp;
        if (comp != g.all()) {
            add(ReductionKind::drop_disconnected_component, v);
        }
    }
    for (int v : unobs) {
        if (g.children(v).empty()) {
            add(ReductionKind::drop_childless_unobserved, v);
        }
    }
    for (int v : unobs) {
        const NodeSet pa = g.parents(v);
        if (pa.size() == 1 && unobs.contains(pa.front())) {
            add(ReductionKind::merge_unobserved_into_unobserved_parent, v);
        }
    }
    for (int v : g.observed()) {
        add(ReductionKind::drop_one_outcome_observed, v);
    }
    for (int v : g.observed()) {
        if (g.parents(v).intersects(unobs)) {
            continue;
        }
        for (int p : g.parents(v)) {
            if (ci_subset(g.without_edge(p, v), g)) {
                add(ReductionKind::drop_redundant_observed_edge, v, p);
            }
        }
    }
    for (int v : unobs) {
        for (int o : unobs) {
            if (o != v && g.parents(v).subset_of(g.parents(o)) && g.children(v).subset_of(g.children(o))) {
                add(ReductionKind::absorb_dominated_unobserved, v, o);
            }
        }
    }
    for (int v : unobs) {
        if (g.children(v).size() == 1) {
            add(ReductionKind::merge_unobserved_into_sole_child, v);
        }
    }
    for (int v : g.observed()) {
        const NodeSet pa = g.parents(v);
        if (pa.size() == 1 && unobs.contains(pa.front()) && g.parents(pa.front()).empty() &&
            g.children(pa.front()).size() == 2) {
            add(ReductionKind::merge_observed_into_parentless_unobserved_parent, v);
        }
    }
    return out;
}

GDag reduce_with_priority(const GDag& g, const std::vector<ReductionKind>& priority)
{
    GDag cur = g;
    for (;;) {
        const auto apps = applicable_reductions(cur);
        std::optional<bool> cur_fails;
        bool progressed = false;
        for (ReductionKind kind : priority) {
            for (const auto& r : apps) {
                if (r.kind != kind) {
                    continue;
                }
                GDag next = apply_reduction(cur, r);
                if (guarded(kind)) {
                    if (!cur_fails) {
                        cur_fails = !sufficient_condition_test(cur);
                    }
                    if (!*cur_fails || sufficient_condition_test(next)) {
                        continue;
                    }
                }
                cur = std::move(next);
                progressed = true;
                break;
            }
            if (progressed) {
                break;
            }
        }
        if (!progressed) {
            return cur;
        }
    }
}

GDag reduce(const GDag& g)
{
    std::vector<ReductionKind> priority;
    for (int k = 0; k < reduction_kind_count; ++k) {
        priority.push_back(static_cast<ReductionKind>(k));
    }
    return reduce_with_priority(g, priority);
}

bool irreducible_failure(const GDag& g)
{
    if (sufficient_condition_test(g)) {
        return false;
    }
    for (const auto& r : applicable_reductions(g)) {
        if (!sufficient_condition_test(apply_reduction(g, r))) {
            return false;
        }
    }
    return true;
}

} // namespace gdag
