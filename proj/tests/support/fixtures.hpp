#pragma once

#include "relgraph/chat_adapter.hpp"
#include "relgraph/schema_registry.hpp"
#include "relgraph/task_graph.hpp"

#include <mutex>
#include <string>
#include <vector>

namespace relgraph::testkit {

/// Student, son, daughter spliced as in the worked construction example:
/// node 0 (F, Xiaohong) is node 1's (M, Xiaoming) third student, node 2 (M)
/// is node 0's son, node 3 (F) is node 1's daughter. Path 2-0-1-3.
TaskGraph construction_example();

/// Chain of `n` edges over alternating genders with friend relations.
TaskGraph path_graph(int edges);

/// `leaves` friends of one hub.
TaskGraph star_graph(int leaves);

/// A small graph with a cycle-free family and social mix, named.
TaskGraph family_graph();

/// Names nodes "P0", "P1", ... in alphabetic surrogate style.
void name_plainly(TaskGraph& graph);

/// Shortest simple-path length by enumerating every simple path; -1 when
/// none exists.
int enumerated_distance(const TaskGraph& graph, NodeId a, NodeId b);

/// Whether any graph built from `relations` by one-new-node splices, over
/// every order, attachment, gender and ordinal, passes graph_violations.
bool some_valid_construction(const SchemaRegistry& registry, const std::vector<RelationType>& relations);

/// Adapter that records every call and answers "OK.".
class RecordingAdapter : public ChatAdapter {
public:
    struct Call {
        std::string session;
        std::vector<Message> history;
    };

    std::string identity() const override { return "recording"; }
    std::string submit(const std::string& session, std::span<const Message> history) override;

    std::vector<Call> calls() const;

private:
    mutable std::mutex mutex_;
    std::vector<Call> calls_;
};

} // namespace relgraph::testkit
