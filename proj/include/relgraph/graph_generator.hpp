#pragma once

#include "relgraph/rng.hpp"
#include "relgraph/schema_registry.hpp"
#include "relgraph/task_graph.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace relgraph {

/// The four ways a new schema attaches to an existing (anchor) edge. The
/// first word names the endpoint of the new schema, the second the endpoint
/// of the anchor edge it is merged with.
enum class SpliceMethod : std::uint8_t { HeadHead, HeadTail, TailHead, TailTail };

std::string_view splice_method_name(SpliceMethod m);

struct SpliceChoice {
    std::size_t anchor_edge = 0;
    SpliceMethod method = SpliceMethod::HeadHead;
    NodeId merged_node;
    std::vector<Gender> new_node_genders; // genders the created node may take, non-empty

    friend bool operator==(const SpliceChoice&, const SpliceChoice&) = default;
};

inline constexpr int kAnchorRetries = 16;
inline constexpr int kSchemaDeferrals = 8;
inline constexpr int kMaxOrdinal = 4;

/// n entries drawn uniformly with replacement, then shuffled.
std::vector<SchemaEntry> sample_schema_multiset(const SchemaRegistry& registry, int n, Rng& rng);

/// Methods of attaching `schema` to the anchor edge that keep the graph
/// valid: endpoint genders admitted, at most one father, one mother and one
/// current edge of each single-current relation per person, no parallel
/// edge, a free ordinal, and family relations some genealogy can realize.
std::vector<SpliceChoice> enumerate_feasible_splices(const TaskGraph& graph, const SchemaEntry& schema,
                                                     std::size_t anchor);

/// Creates the first edge of an empty graph.
void bootstrap(TaskGraph& graph, const SchemaEntry& schema, Rng& rng);

/// Adds one node and one edge; the node's gender is drawn from
/// choice.new_node_genders, the ordinal from the free values in 1..4.
void apply_splice(TaskGraph& graph, const SchemaEntry& schema, const SpliceChoice& choice, Rng& rng);

/// Deterministic in (registry, n, seed). Throws GenerationExhausted when a
/// schema cannot be placed after all anchor retries and deferrals.
TaskGraph generate_task_graph(const SchemaRegistry& registry, int n, std::uint64_t seed);

/// Unordered pairs at the given undirected distance, in node order.
std::vector<std::pair<NodeId, NodeId>> pairs_at_distance(const TaskGraph& graph, int d);

/// One pair per distance 2..5, each drawn uniformly and put in random order.
/// Throws DistanceUnavailable for the first missing distance.
std::map<int, std::pair<NodeId, NodeId>> distance_bucket_tasks(const TaskGraph& graph, Rng& rng);

/// Human-readable list of broken graph invariants; empty for a valid graph.
std::vector<std::string> graph_violations(const TaskGraph& graph, const SchemaRegistry& registry);

} // namespace relgraph
