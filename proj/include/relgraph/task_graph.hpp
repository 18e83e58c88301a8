#pragma once

#include "relgraph/schema_registry.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relgraph {

struct NodeId {
    std::uint32_t value = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Node {
    NodeId id;
    Gender gender = Gender::Female;
    std::optional<std::string> name;

    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    NodeId head;
    NodeId tail;
    RelationType relation;
    std::optional<int> ordinal;
    int insertion_index = 0; // 1-based construction order

    NodeId other(NodeId n) const { return n == head ? tail : head; }
    bool touches(NodeId n) const { return n == head || n == tail; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A social-relationship graph built by splicing basic schemas.
///
/// Node ids are dense: node i has id i. Edges are kept in insertion order.
class TaskGraph {
public:
    TaskGraph() = default;
    explicit TaskGraph(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    const std::vector<RelationType>& schema_multiset() const { return schema_multiset_; }
    void set_schema_multiset(std::vector<RelationType> schemas) { schema_multiset_ = std::move(schemas); }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool empty() const { return edges_.empty(); }
    bool contains(NodeId id) const { return id.value < nodes_.size(); }

    const Node& node(NodeId id) const;
    Node& node(NodeId id);

    NodeId add_node(Gender gender);
    /// Appends an edge with the next insertion index.
    const Edge& add_edge(NodeId head, NodeId tail, RelationType relation, std::optional<int> ordinal);
    void set_ordinal(std::size_t edge_index, std::optional<int> ordinal);
    /// Drops the most recent edge and any node left without edges.
    void pop_edge();

    /// Indices into edges() of the edges touching a node, in insertion order.
    std::vector<std::size_t> incident(NodeId id) const;

    /// Node carrying the given surrogate name, if any.
    std::optional<NodeId> find_by_name(std::string_view name) const;
    const std::string& name_of(NodeId id) const; // throws MissingName

    /// Line-oriented text form with fixed field order; parse() inverts it.
    std::string serialize() const;
    static TaskGraph parse(std::string_view document);

    friend bool operator==(const TaskGraph&, const TaskGraph&) = default;

private:
    std::uint64_t seed_ = 0;
    std::vector<RelationType> schema_multiset_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
};

} // namespace relgraph
