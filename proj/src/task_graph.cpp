#include "relgraph/task_graph.hpp"

#include "relgraph/error.hpp"
#include "relgraph/text.hpp"

#include <string>

namespace relgraph {

const Node& TaskGraph::node(NodeId id) const {
    if (!contains(id)) {
        throw NodeNotFound("node " + std::to_string(id.value) + " not in graph");
    }
    return nodes_[id.value];
}

Node& TaskGraph::node(NodeId id) {
    if (!contains(id)) {
        throw NodeNotFound("node " + std::to_string(id.value) + " not in graph");
    }
    return nodes_[id.value];
}

NodeId TaskGraph::add_node(Gender gender) {
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    nodes_.push_back(Node{id, gender, std::nullopt});
    return id;
}

const Edge& TaskGraph::add_edge(NodeId head, NodeId tail, RelationType relation, std::optional<int> ordinal) {
    if (!contains(head) || !contains(tail)) {
        throw NodeNotFound("edge endpoint not in graph");
    }
    edges_.push_back(Edge{head, tail, std::move(relation), ordinal, static_cast<int>(edges_.size()) + 1});
    return edges_.back();
}

void TaskGraph::set_ordinal(std::size_t edge_index, std::optional<int> ordinal) {
    edges_.at(edge_index).ordinal = ordinal;
}

void TaskGraph::pop_edge() {
    if (edges_.empty()) {
        return;
    }
    edges_.pop_back();
    // Splicing only ever appends nodes, so orphans sit at the end.
    while (!nodes_.empty()) {
        const NodeId last = nodes_.back().id;
        bool used = false;
        for (const auto& e : edges_) {
            used = used || e.touches(last);
        }
        if (used) {
            break;
        }
        nodes_.pop_back();
    }
}

std::vector<std::size_t> TaskGraph::incident(NodeId id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (edges_[i].touches(id)) {
            out.push_back(i);
        }
    }
    return out;
}

std::optional<NodeId> TaskGraph::find_by_name(std::string_view name) const {
    for (const auto& n : nodes_) {
        if (n.name && *n.name == name) {
            return n.id;
        }
    }
    return std::nullopt;
}

const std::string& TaskGraph::name_of(NodeId id) const {
    const auto& n = node(id);
    if (!n.name) {
        throw MissingName("node " + std::to_string(id.value) + " has no name");
    }
    return *n.name;
}

std::string TaskGraph::serialize() const {
    std::string out = "# relgraph task graph v1\n";
    out += "seed|" + std::to_string(seed_) + "\n";
    out += "schemas|" + text::join(schema_multiset_, ",") + "\n";
    for (const auto& n : nodes_) {
        out += "node|" + std::to_string(n.id.value) + "|" + gender_code(n.gender) + "|" + n.name.value_or("-") + "\n";
    }
    for (const auto& e : edges_) {
        out += "edge|" + std::to_string(e.head.value) + "|" + std::to_string(e.tail.value) + "|" + e.relation + "|" +
               (e.ordinal ? std::to_string(*e.ordinal) : std::string("-")) + "|" +
               std::to_string(e.insertion_index) + "\n";
    }
    return out;
}

namespace {

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) {
            throw MalformedGraphFile(where + ": bad number '" + s + "'");
        }
        return v;
    } catch (const std::logic_error&) {
        throw MalformedGraphFile(where + ": bad number '" + s + "'");
    }
}

} // namespace

TaskGraph TaskGraph::parse(std::string_view document) {
    TaskGraph g;
    int line_no = 0;
    for (const auto& line : text::data_lines(document)) {
        ++line_no;
        const auto f = text::split(line, '|');
        const auto where = "graph record " + std::to_string(line_no);
        if (f[0] == "seed" && f.size() == 2) {
            g.seed_ = parse_u64(f[1], where);
        } else if (f[0] == "schemas" && f.size() == 2) {
            g.schema_multiset_ = f[1].empty() ? std::vector<std::string>{} : text::split(f[1], ',');
        } else if (f[0] == "node" && f.size() == 4) {
            if (parse_u64(f[1], where) != g.nodes_.size()) {
                throw MalformedGraphFile(where + ": node ids must be dense and ordered");
            }
            auto gender = parse_gender_code(f[2]);
            if (!gender) {
                throw MalformedGraphFile(where + ": bad gender code");
            }
            const auto id = g.add_node(*gender);
            if (f[3] != "-") {
                g.node(id).name = f[3];
            }
        } else if (f[0] == "edge" && f.size() == 6) {
            const NodeId head{static_cast<std::uint32_t>(parse_u64(f[1], where))};
            const NodeId tail{static_cast<std::uint32_t>(parse_u64(f[2], where))};
            if (!g.contains(head) || !g.contains(tail)) {
                throw MalformedGraphFile(where + ": edge endpoint not declared");
            }
            std::optional<int> ordinal;
            if (f[4] != "-") {
                ordinal = static_cast<int>(parse_u64(f[4], where));
            }
            const auto& e = g.add_edge(head, tail, f[3], ordinal);
            if (static_cast<std::uint64_t>(e.insertion_index) != parse_u64(f[5], where)) {
                throw MalformedGraphFile(where + ": insertion indices must run 1..n in order");
            }
        } else {
            throw MalformedGraphFile(where + ": unrecognized record '" + line + "'");
        }
    }
    return g;
}

} // namespace relgraph
