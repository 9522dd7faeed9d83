#include "gdag/graph.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "gdag/error.hpp"

namespace gdag {

std::string_view to_string(NodeKind kind)
{
    return kind == NodeKind::observed ? "observed" : "unobserved";
}

namespace {

void check_id(const std::string& id)
{
    if (id.empty()) {
        throw ValidationError("node id must be nonempty");
    }
    for (unsigned char c : id) {
        if (std::isspace(c)) {
            throw ValidationError("node id '" + id + "' contains whitespace");
        }
    }
}

} // namespace

GDag::GDag(std::vector<Node> nodes, const std::vector<std::pair<std::string, std::string>>& edges)
    : nodes_(std::move(nodes))
{
    if (nodes_.size() > static_cast<std::size_t>(max_nodes)) {
        throw ValidationError("graph has more than 64 nodes");
    }
    std::set<std::string_view> seen;
    for (const auto& n : nodes_) {
        check_id(n.id);
        if (!seen.insert(n.id).second) {
            throw ValidationError("duplicate node '" + n.id + "'");
        }
    }
    edges_.reserve(edges.size());
    for (const auto& [p, c] : edges) {
        auto pi = find(p);
        auto ci = find(c);
        if (!pi || !ci) {
            throw ValidationError("edge " + p + " -> " + c + " references an unknown node");
        }
        edges_.emplace_back(*pi, *ci);
    }
    build_index();
}

GDag GDag::from_indices(std::vector<Node> nodes, std::vector<Edge> edges)
{
    GDag g;
    g.nodes_ = std::move(nodes);
    if (g.nodes_.size() > static_cast<std::size_t>(max_nodes)) {
        throw ValidationError("graph has more than 64 nodes");
    }
    std::set<std::string_view> seen;
    for (const auto& n : g.nodes_) {
        check_id(n.id);
        if (!seen.insert(n.id).second) {
            throw ValidationError("duplicate node '" + n.id + "'");
        }
    }
    for (auto [p, c] : edges) {
        if (p < 0 || c < 0 || p >= g.size() || c >= g.size()) {
            throw ValidationError("edge index out of range");
        }
    }
    g.edges_ = std::move(edges);
    g.build_index();
    return g;
}

void GDag::build_index()
{
    const auto n = nodes_.size();
    parents_.assign(n, NodeSet{});
    children_.assign(n, NodeSet{});
    observed_ = NodeSet{};
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes_[i].kind == NodeKind::observed) {
            observed_.insert(static_cast<int>(i));
        }
    }
    for (auto [p, c] : edges_) {
        if (p == c) {
            throw ValidationError("self-loop on '" + nodes_[static_cast<std::size_t>(p)].id + "'");
        }
        auto& pa = parents_[static_cast<std::size_t>(c)];
        if (pa.contains(p)) {
            throw ValidationError("duplicate edge " + nodes_[static_cast<std::size_t>(p)].id + " -> " +
                                  nodes_[static_cast<std::size_t>(c)].id);
        }
        pa.insert(p);
        children_[static_cast<std::size_t>(p)].insert(c);
    }
    if (!try_topological_order(size(), parents_)) {
        throw ValidationError("graph contains a directed cycle");
    }
}

std::optional<int> GDag::find(std::string_view id) const
{
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id == id) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

int GDag::index_of(std::string_view id) const
{
    if (auto i = find(id)) {
        return *i;
    }
    throw UnknownNodeError(std::string(id));
}

NodeSet GDag::node_set(std::span<const std::string> ids) const
{
    NodeSet s;
    for (const auto& id : ids) {
        s.insert(index_of(id));
    }
    return s;
}

NodeSet GDag::node_set(std::initializer_list<std::string_view> ids) const
{
    NodeSet s;
    for (auto id : ids) {
        s.insert(index_of(id));
    }
    return s;
}

std::vector<std::string> GDag::ids(NodeSet set) const
{
    std::vector<std::string> out;
    for (int i : set) {
        out.push_back(id(i));
    }
    return out;
}

void GDag::check_members(NodeSet set) const
{
    if (!set.subset_of(all())) {
        throw PreconditionError("node set refers to indices outside the graph");
    }
}

GDag GDag::with_edge(int parent, int child) const
{
    auto edges = edges_;
    edges.emplace_back(parent, child);
    return with_edges(std::move(edges));
}

GDag GDag::without_edge(int parent, int child) const
{
    auto edges = edges_;
    auto it = std::find(edges.begin(), edges.end(), Edge{parent, child});
    if (it == edges.end()) {
        throw PreconditionError("edge " + id(parent) + " -> " + id(child) + " does not exist");
    }
    edges.erase(it);
    return with_edges(std::move(edges));
}

GDag GDag::without_nodes(NodeSet removed) const
{
    std::vector<int> remap(nodes_.size(), -1);
    std::vector<Node> nodes;
    for (int i = 0; i < size(); ++i) {
        if (!removed.contains(i)) {
            remap[static_cast<std::size_t>(i)] = static_cast<int>(nodes.size());
            nodes.push_back(nodes_[static_cast<std::size_t>(i)]);
        }
    }
    std::vector<Edge> edges;
    for (auto [p, c] : edges_) {
        int np = remap[static_cast<std::size_t>(p)];
        int nc = remap[static_cast<std::size_t>(c)];
        if (np >= 0 && nc >= 0) {
            edges.emplace_back(np, nc);
        }
    }
    return from_indices(std::move(nodes), std::move(edges));
}

GDag GDag::with_edges(std::vector<Edge> edges) const
{
    GDag g;
    g.nodes_ = nodes_;
    g.edges_ = std::move(edges);
    g.build_index();
    return g;
}

NodeSet inclusive_ancestors(const GDag& g, NodeSet u)
{
    g.check_members(u);
    NodeSet result = u;
    NodeSet frontier = u;
    while (!frontier.empty()) {
        NodeSet next;
        for (int v : frontier) {
            next |= g.parents(v);
        }
        frontier = next - result;
        result |= next;
    }
    return result;
}

NodeSet inclusive_children(const GDag& g, NodeSet u)
{
    g.check_members(u);
    NodeSet result = u;
    for (int v : u) {
        result |= g.children(v);
    }
    return result;
}

NodeSet descendants(const GDag& g, int node)
{
    NodeSet result;
    NodeSet frontier = g.children(node);
    while (!frontier.empty()) {
        result |= frontier;
        NodeSet next;
        for (int v : frontier) {
            next |= g.children(v);
        }
        frontier = next - result;
    }
    return result;
}

std::optional<std::vector<int>> try_topological_order(int n, std::span<const NodeSet> parents)
{
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    NodeSet placed;
    const NodeSet everything = NodeSet::first(n);
    while (placed != everything) {
        bool progressed = false;
        for (int v : everything - placed) {
            if (parents[static_cast<std::size_t>(v)].subset_of(placed)) {
                // Restart the scan after each placement so that ties always go
                // to the earliest declared ready node.
                placed.insert(v);
                order.push_back(v);
                progressed = true;
                break;
            }
        }
        if (!progressed) {
            return std::nullopt;
        }
    }
    return order;
}

std::vector<int> topological_order(const GDag& g)
{
    auto order = try_topological_order(g.size(), g.parent_sets());
    if (!order) {
        throw ValidationError("graph contains a directed cycle");
    }
    return *order;
}

NodeSet unobserved_path_reach(const GDag& g, int from)
{
    NodeSet reach;
    NodeSet frontier = g.children(from);
    while (!frontier.empty()) {
        reach |= frontier;
        NodeSet next;
        for (int v : frontier & g.unobserved()) {
            next |= g.children(v);
        }
        frontier = next - reach;
    }
    return reach;
}

} // namespace gdag
