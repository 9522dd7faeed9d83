#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gdag {

enum class NodeKind : std::uint8_t { observed, unobserved };

std::string_view to_string(NodeKind kind);

/// A set of node indices of one graph, stored as a 64-bit mask.
class NodeSet {
public:
    using Mask = std::uint64_t;

    constexpr NodeSet() = default;
    constexpr explicit NodeSet(Mask mask) : mask_(mask) {}

    static constexpr NodeSet single(int index) { return NodeSet(Mask{1} << index); }
    /// {0, ..., n-1}
    static constexpr NodeSet first(int n) { return NodeSet(n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1); }

    constexpr Mask mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr int size() const { return std::popcount(mask_); }
    constexpr bool contains(int index) const { return (mask_ >> index) & 1U; }
    constexpr bool subset_of(NodeSet other) const { return (mask_ & ~other.mask_) == 0; }
    constexpr bool intersects(NodeSet other) const { return (mask_ & other.mask_) != 0; }
    /// Lowest member; undefined on the empty set.
    constexpr int front() const { return std::countr_zero(mask_); }

    constexpr NodeSet& insert(int index) { mask_ |= Mask{1} << index; return *this; }
    constexpr NodeSet& erase(int index) { mask_ &= ~(Mask{1} << index); return *this; }

    friend constexpr NodeSet operator|(NodeSet a, NodeSet b) { return NodeSet(a.mask_ | b.mask_); }
    friend constexpr NodeSet operator&(NodeSet a, NodeSet b) { return NodeSet(a.mask_ & b.mask_); }
    friend constexpr NodeSet operator-(NodeSet a, NodeSet b) { return NodeSet(a.mask_ & ~b.mask_); }
    constexpr NodeSet& operator|=(NodeSet b) { mask_ |= b.mask_; return *this; }
    constexpr NodeSet& operator&=(NodeSet b) { mask_ &= b.mask_; return *this; }
    constexpr NodeSet& operator-=(NodeSet b) { mask_ &= ~b.mask_; return *this; }

    friend constexpr bool operator==(NodeSet, NodeSet) = default;
    friend constexpr auto operator<=>(NodeSet, NodeSet) = default;

    class iterator {
    public:
        using value_type = int;
        using difference_type = std::ptrdiff_t;

        constexpr iterator() = default;
        constexpr explicit iterator(Mask rest) : rest_(rest) {}
        constexpr int operator*() const { return std::countr_zero(rest_); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr iterator operator++(int) { auto old = *this; ++*this; return old; }
        friend constexpr bool operator==(iterator, iterator) = default;

    private:
        Mask rest_ = 0;
    };

    constexpr iterator begin() const { return iterator(mask_); }
    constexpr iterator end() const { return iterator(0); }

    std::vector<int> indices() const { return {begin(), end()}; }

private:
    Mask mask_ = 0;
};

struct Node {
    std::string id;
    NodeKind kind = NodeKind::observed;

    friend bool operator==(const Node&, const Node&) = default;
};

/// (parent index, child index)
using Edge = std::pair<int, int>;

/// A directed acyclic graph whose nodes are tagged observed or unobserved.
///
/// Values are immutable: every structural edit returns a new graph. Node and
/// edge declaration order is preserved and drives all deterministic
/// tie-breaking. At most 64 nodes.
class GDag {
public:
    static constexpr int max_nodes = 64;

    GDag() = default;

    /// Validates ids, edge endpoints, self-loops, duplicates and acyclicity.
    /// Throws ValidationError.
    GDag(std::vector<Node> nodes, const std::vector<std::pair<std::string, std::string>>& edges);

    /// Same as above with edges given by index.
    static GDag from_indices(std::vector<Node> nodes, std::vector<Edge> edges);

    int size() const { return static_cast<int>(nodes_.size()); }
    bool empty() const { return nodes_.empty(); }

    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
    const std::string& id(int index) const { return node(index).id; }
    NodeKind kind(int index) const { return node(index).kind; }
    bool is_observed(int index) const { return kind(index) == NodeKind::observed; }

    /// Edges in declaration order.
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(int parent, int child) const { return parents_[static_cast<std::size_t>(child)].contains(parent); }

    NodeSet parents(int index) const { return parents_.at(static_cast<std::size_t>(index)); }
    NodeSet children(int index) const { return children_.at(static_cast<std::size_t>(index)); }
    std::span<const NodeSet> parent_sets() const { return parents_; }
    std::span<const NodeSet> child_sets() const { return children_; }

    NodeSet all() const { return NodeSet::first(size()); }
    NodeSet observed() const { return observed_; }
    NodeSet unobserved() const { return all() - observed_; }

    std::optional<int> find(std::string_view id) const;
    /// Throws UnknownNodeError.
    int index_of(std::string_view id) const;
    /// Throws UnknownNodeError.
    NodeSet node_set(std::span<const std::string> ids) const;
    NodeSet node_set(std::initializer_list<std::string_view> ids) const;
    /// Member ids in declaration order.
    std::vector<std::string> ids(NodeSet set) const;

    /// Throws PreconditionError if any member is not a node of this graph.
    void check_members(NodeSet set) const;

    GDag with_edge(int parent, int child) const;
    GDag without_edge(int parent, int child) const;
    /// Drops the nodes and their incident edges; remaining nodes keep their relative order.
    GDag without_nodes(NodeSet removed) const;
    /// Replaces the edge list wholesale (validated).
    GDag with_edges(std::vector<Edge> edges) const;

    friend bool operator==(const GDag& a, const GDag& b)
    {
        return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    void build_index();

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<NodeSet> parents_;
    std::vector<NodeSet> children_;
    NodeSet observed_;
};

/// An(u): u together with all of its ancestors.
NodeSet inclusive_ancestors(const GDag& g, NodeSet u);

/// u together with all children of members of u.
NodeSet inclusive_children(const GDag& g, NodeSet u);

/// All strict descendants of a node.
NodeSet descendants(const GDag& g, int node);

/// Kahn's algorithm; among ready nodes the earliest declared goes first.
/// Throws ValidationError on a cycle.
std::vector<int> topological_order(const GDag& g);

/// Same order, but never throws; empty optional on a cycle.
std::optional<std::vector<int>> try_topological_order(int n, std::span<const NodeSet> parents);

/// Nodes reachable from `from` along directed paths whose intermediate nodes
/// are all unobserved (the `from ~> to` relation). Excludes `from` itself
/// unless it lies on such a cycle, which cannot happen in a DAG.
NodeSet unobserved_path_reach(const GDag& g, int from);

} // namespace gdag
