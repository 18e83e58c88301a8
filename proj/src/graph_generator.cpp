#include "relgraph/graph_generator.hpp"

#include "relgraph/error.hpp"
#include "relgraph/kinship.hpp"
#include "relgraph/relation_oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace relgraph {

namespace {

constexpr SpliceMethod kMethods[] = {SpliceMethod::HeadHead, SpliceMethod::HeadTail, SpliceMethod::TailHead,
                                     SpliceMethod::TailTail};

bool merges_head(SpliceMethod m) { return m == SpliceMethod::HeadHead || m == SpliceMethod::HeadTail; }
bool onto_anchor_head(SpliceMethod m) { return m == SpliceMethod::HeadHead || m == SpliceMethod::TailHead; }

struct ParentCount {
    int fathers = 0;
    int mothers = 0;
};

ParentCount parents_of(const TaskGraph& g, NodeId n) {
    ParentCount c;
    for (const auto& e : g.edges()) {
        if (e.tail == n && e.relation == "father") ++c.fathers;
        if (e.tail == n && e.relation == "mother") ++c.mothers;
        if (e.head == n && (e.relation == "son" || e.relation == "daughter")) {
            (g.node(e.tail).gender == Gender::Male ? c.fathers : c.mothers) += 1;
        }
    }
    return c;
}

int incident_count(const TaskGraph& g, NodeId n, const std::vector<std::string>& relations) {
    int count = 0;
    for (const auto& e : g.edges()) {
        if (e.touches(n) && std::find(relations.begin(), relations.end(), e.relation) != relations.end()) {
            ++count;
        }
    }
    return count;
}

/// Node-local cardinality problems at `n`; `single` lists the SingleCurrent
/// relations to check.
void cardinality_violations(const TaskGraph& g, NodeId n, const std::vector<std::string>& single,
                            std::vector<std::string>& out) {
    const auto where = "node " + std::to_string(n.value);
    const auto p = parents_of(g, n);
    if (p.fathers > 1) out.push_back(where + " has more than one father");
    if (p.mothers > 1) out.push_back(where + " has more than one mother");
    for (const auto& r : single) {
        if (incident_count(g, n, {r}) > 1) out.push_back(where + " has more than one current " + r + " edge");
    }
}

/// Ordinals used by edges (other than `skip`) sharing the head or tail
/// group of edge `e`.
std::set<int> used_ordinals(const TaskGraph& g, const Edge& e, std::size_t skip) {
    std::set<int> used;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& o = g.edges()[i];
        if (i != skip && o.relation == e.relation && o.ordinal && (o.head == e.head || o.tail == e.tail)) {
            used.insert(*o.ordinal);
        }
    }
    return used;
}

std::vector<int> free_ordinals(const TaskGraph& g, const Edge& e, std::size_t skip) {
    const auto used = used_ordinals(g, e, skip);
    std::vector<int> out;
    for (int v = 1; v <= kMaxOrdinal; ++v) {
        if (used.count(v) == 0) out.push_back(v);
    }
    return out;
}

/// Every person linked to `from` through family edges only must stand in a
/// relation some genealogy realizes.
bool kin_consistent(const TaskGraph& g, NodeId from) {
    std::vector<bool> seen(g.nodes().size(), false);
    std::deque<NodeId> queue{from};
    seen[from.value] = true;
    while (!queue.empty()) {
        const NodeId cur = queue.front();
        queue.pop_front();
        for (const auto i : g.incident(cur)) {
            const auto& e = g.edges()[i];
            const NodeId next = e.other(cur);
            if (!is_kin_relation(e.relation) || seen[next.value]) continue;
            seen[next.value] = true;
            queue.push_back(next);
            const auto chain = relation_chain(g, next, from);
            const auto outcome = chain_kin_outcome(chain.atoms, chain.genders);
            if (outcome && outcome->kind == KinOutcomeKind::Unsatisfiable) {
                return false;
            }
        }
    }
    return true;
}

/// Checks the most recently added edge against everything before it.
bool last_edge_admissible(const TaskGraph& g, const SchemaEntry& schema, NodeId created) {
    const std::size_t last = g.edges().size() - 1;
    const Edge& e = g.edges()[last];
    if (e.head == e.tail) return false;
    if (!admits(schema.head, g.node(e.head).gender) || !admits(schema.tail, g.node(e.tail).gender)) return false;
    for (std::size_t i = 0; i < last; ++i) {
        const auto& o = g.edges()[i];
        if (o.relation != e.relation) continue;
        if ((o.head == e.head && o.tail == e.tail) || (schema.symmetric() && o.head == e.tail && o.tail == e.head)) {
            return false;
        }
    }
    std::vector<std::string> problems;
    std::vector<std::string> single;
    if (schema.single_current()) single.push_back(schema.relation);
    cardinality_violations(g, e.head, single, problems);
    cardinality_violations(g, e.tail, single, problems);
    if (!problems.empty()) return false;
    if (schema.ordinal() && free_ordinals(g, e, last).empty()) return false;
    return !is_kin_relation(e.relation) || kin_consistent(g, created);
}

std::vector<Gender> candidate_genders(GenderConstraint c) {
    std::vector<Gender> out;
    for (const Gender g : {Gender::Female, Gender::Male}) {
        if (admits(c, g)) out.push_back(g);
    }
    return out;
}

std::optional<int> draw_ordinal(const TaskGraph& g, const SchemaEntry& schema, Rng& rng) {
    if (!schema.ordinal()) return std::nullopt;
    const auto options = free_ordinals(g, g.edges().back(), g.edges().size() - 1);
    if (options.empty()) {
        throw InfeasibleSplice("no free ordinal for " + schema.relation);
    }
    return rng.pick(std::span<const int>(options));
}

} // namespace

std::string_view splice_method_name(SpliceMethod m) {
    switch (m) {
    case SpliceMethod::HeadHead: return "head-head";
    case SpliceMethod::HeadTail: return "head-tail";
    case SpliceMethod::TailHead: return "tail-head";
    case SpliceMethod::TailTail: return "tail-tail";
    }
    return "?";
}

std::vector<SchemaEntry> sample_schema_multiset(const SchemaRegistry& registry, int n, Rng& rng) {
    std::vector<SchemaEntry> out;
    out.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) {
        out.push_back(rng.pick(std::span<const SchemaEntry>(registry.entries())));
    }
    rng.shuffle(std::span<SchemaEntry>(out));
    return out;
}

std::vector<SpliceChoice> enumerate_feasible_splices(const TaskGraph& graph, const SchemaEntry& schema,
                                                     std::size_t anchor) {
    std::vector<SpliceChoice> out;
    if (anchor >= graph.edges().size()) return out;
    TaskGraph scratch = graph;
    const Edge& a = graph.edges()[anchor];
    for (const auto m : kMethods) {
        const NodeId merged = onto_anchor_head(m) ? a.head : a.tail;
        const auto merged_constraint = merges_head(m) ? schema.head : schema.tail;
        if (!admits(merged_constraint, graph.node(merged).gender)) continue;
        SpliceChoice choice{anchor, m, merged, {}};
        for (const Gender g : candidate_genders(merges_head(m) ? schema.tail : schema.head)) {
            const NodeId created = scratch.add_node(g);
            const NodeId head = merges_head(m) ? merged : created;
            const NodeId tail = merges_head(m) ? created : merged;
            scratch.add_edge(head, tail, schema.relation, std::nullopt);
            if (last_edge_admissible(scratch, schema, created)) {
                choice.new_node_genders.push_back(g);
            }
            scratch.pop_edge();
        }
        if (!choice.new_node_genders.empty()) out.push_back(std::move(choice));
    }
    return out;
}

void bootstrap(TaskGraph& graph, const SchemaEntry& schema, Rng& rng) {
    if (!graph.empty()) {
        throw InfeasibleSplice("bootstrap needs an empty graph");
    }
    const auto heads = candidate_genders(schema.head);
    const auto tails = candidate_genders(schema.tail);
    const Gender hg = rng.pick(std::span<const Gender>(heads));
    const Gender tg = rng.pick(std::span<const Gender>(tails));
    const NodeId head = graph.add_node(hg);
    const NodeId tail = graph.add_node(tg);
    graph.add_edge(head, tail, schema.relation, std::nullopt);
    graph.set_ordinal(0, draw_ordinal(graph, schema, rng));
}

void apply_splice(TaskGraph& graph, const SchemaEntry& schema, const SpliceChoice& choice, Rng& rng) {
    const auto feasible = enumerate_feasible_splices(graph, schema, choice.anchor_edge);
    const auto match = std::find_if(feasible.begin(), feasible.end(), [&](const SpliceChoice& c) {
        return c.method == choice.method && c.merged_node == choice.merged_node;
    });
    if (match == feasible.end()) {
        throw InfeasibleSplice("splice " + std::string(splice_method_name(choice.method)) + " of " + schema.relation +
                               " onto edge " + std::to_string(choice.anchor_edge + 1) + " is not feasible");
    }
    for (const Gender g : choice.new_node_genders) {
        if (std::find(match->new_node_genders.begin(), match->new_node_genders.end(), g) ==
            match->new_node_genders.end()) {
            throw InfeasibleSplice("requested gender for the new node is not feasible");
        }
    }
    const auto& genders = choice.new_node_genders.empty() ? match->new_node_genders : choice.new_node_genders;
    const Gender g = rng.pick(std::span<const Gender>(genders));
    const NodeId created = graph.add_node(g);
    const bool head_merged = merges_head(choice.method);
    graph.add_edge(head_merged ? choice.merged_node : created, head_merged ? created : choice.merged_node,
                   schema.relation, std::nullopt);
    graph.set_ordinal(graph.edges().size() - 1, draw_ordinal(graph, schema, rng));
}

TaskGraph generate_task_graph(const SchemaRegistry& registry, int n, std::uint64_t seed) {
    if (n < 1) {
        throw GenerationExhausted("a task graph needs at least one schema");
    }
    Rng rng = make_rng(seed, Stream::Generation);
    const auto sampled = sample_schema_multiset(registry, n, rng);
    TaskGraph graph(seed);
    std::vector<RelationType> names;
    for (const auto& s : sampled) names.push_back(s.relation);
    graph.set_schema_multiset(names);

    struct Pending {
        SchemaEntry schema;
        int deferrals = 0;
    };
    std::deque<Pending> queue;
    for (const auto& s : sampled) queue.push_back(Pending{s, 0});

    bootstrap(graph, queue.front().schema, rng);
    queue.pop_front();
    while (!queue.empty()) {
        Pending next = queue.front();
        queue.pop_front();
        bool placed = false;
        for (int attempt = 0; attempt < kAnchorRetries && !placed; ++attempt) {
            const auto anchor = static_cast<std::size_t>(rng.below(graph.edges().size()));
            const auto choices = enumerate_feasible_splices(graph, next.schema, anchor);
            if (choices.empty()) continue;
            apply_splice(graph, next.schema, rng.pick(std::span<const SpliceChoice>(choices)), rng);
            placed = true;
        }
        if (placed) continue;
        if (next.deferrals >= kSchemaDeferrals) {
            throw GenerationExhausted("could not place schema " + next.schema.relation + " (seed " +
                                      std::to_string(seed) + ", n " + std::to_string(n) + ") after " +
                                      std::to_string(graph.edges().size()) + " edges; partial graph:\n" +
                                      graph.serialize());
        }
        ++next.deferrals;
        const auto lo = queue.empty() ? 0 : 1;
        const auto pos = static_cast<std::size_t>(rng.between(lo, static_cast<int>(queue.size())));
        queue.insert(queue.begin() + static_cast<std::ptrdiff_t>(pos), next);
    }
    return graph;
}

std::vector<std::pair<NodeId, NodeId>> pairs_at_distance(const TaskGraph& graph, int d) {
    const auto dist = all_distances(graph);
    std::vector<std::pair<NodeId, NodeId>> out;
    for (std::uint32_t i = 0; i < dist.size(); ++i) {
        for (std::uint32_t j = i + 1; j < dist.size(); ++j) {
            if (dist[i][j] == d) out.emplace_back(NodeId{i}, NodeId{j});
        }
    }
    return out;
}

std::map<int, std::pair<NodeId, NodeId>> distance_bucket_tasks(const TaskGraph& graph, Rng& rng) {
    std::map<int, std::pair<NodeId, NodeId>> out;
    for (int d = 2; d <= 5; ++d) {
        const auto pairs = pairs_at_distance(graph, d);
        if (pairs.empty()) {
            throw DistanceUnavailable(d);
        }
        auto pair = rng.pick(std::span<const std::pair<NodeId, NodeId>>(pairs));
        if (rng.coin()) std::swap(pair.first, pair.second);
        out.emplace(d, pair);
    }
    return out;
}

std::vector<std::string> graph_violations(const TaskGraph& graph, const SchemaRegistry& registry) {
    std::vector<std::string> out;
    const auto& edges = graph.edges();
    if (edges.size() != graph.schema_multiset().size()) {
        out.push_back("edge count differs from the schema multiset size");
    } else {
        std::multiset<std::string> want(graph.schema_multiset().begin(), graph.schema_multiset().end());
        std::multiset<std::string> have;
        for (const auto& e : edges) have.insert(e.relation);
        if (want != have) out.push_back("edge relations differ from the schema multiset");
    }
    std::set<std::string> single;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        const auto where = "edge " + std::to_string(i + 1);
        if (e.insertion_index != static_cast<int>(i) + 1) out.push_back(where + " has a wrong insertion index");
        if (!graph.contains(e.head) || !graph.contains(e.tail)) {
            out.push_back(where + " has a missing endpoint");
            continue;
        }
        if (e.head == e.tail) out.push_back(where + " is a self-relation");
        const auto* schema = registry.find(e.relation);
        if (schema == nullptr) {
            out.push_back(where + " has unknown relation " + e.relation);
            continue;
        }
        if (!admits(schema->head, graph.node(e.head).gender) || !admits(schema->tail, graph.node(e.tail).gender)) {
            out.push_back(where + " violates the gender constraint of " + e.relation);
        }
        if (schema->ordinal() != e.ordinal.has_value()) {
            out.push_back(where + " ordinal presence does not match the order spec");
        }
        if (e.ordinal && (*e.ordinal < 1 || *e.ordinal > kMaxOrdinal)) out.push_back(where + " ordinal out of range");
        if (schema->single_current()) single.insert(e.relation);
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = edges[j];
            if (o.relation != e.relation) continue;
            if ((o.head == e.head && o.tail == e.tail) || (schema->symmetric() && o.head == e.tail && o.tail == e.head)) {
                out.push_back(where + " duplicates edge " + std::to_string(j + 1));
            }
            if (e.ordinal && o.ordinal == e.ordinal && (o.head == e.head || o.tail == e.tail)) {
                out.push_back(where + " repeats the ordinal of edge " + std::to_string(j + 1));
            }
        }
    }
    const std::vector<std::string> single_list(single.begin(), single.end());
    for (const auto& n : graph.nodes()) {
        cardinality_violations(graph, n.id, single_list, out);
    }
    if (!graph.nodes().empty()) {
        const auto dist = all_distances(graph);
        if (std::any_of(dist[0].begin(), dist[0].end(), [](int d) { return d < 0; })) {
            out.push_back("graph is not connected");
        } else {
            for (const auto& n : graph.nodes()) {
                if (!kin_consistent(graph, n.id)) {
                    out.push_back("family relations around node " + std::to_string(n.id.value) +
                                  " admit no genealogy");
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace relgraph
