#include "fixtures.hpp"

#include "relgraph/graph_generator.hpp"

#include <algorithm>
#include <functional>

namespace relgraph::testkit {

TaskGraph construction_example() {
    TaskGraph g(0);
    const auto xiaohong = g.add_node(Gender::Female);
    const auto xiaoming = g.add_node(Gender::Male);
    g.add_edge(xiaohong, xiaoming, "student", 3);
    const auto son = g.add_node(Gender::Male);
    g.add_edge(son, xiaohong, "son", 1);
    const auto daughter = g.add_node(Gender::Female);
    g.add_edge(daughter, xiaoming, "daughter", 1);
    g.set_schema_multiset({"student", "son", "daughter"});
    g.node(xiaohong).name = "Xiaohong";
    g.node(xiaoming).name = "Xiaoming";
    g.node(son).name = "Xiaogang";
    g.node(daughter).name = "Xiaoli";
    return g;
}

TaskGraph path_graph(int edges) {
    TaskGraph g(0);
    auto prev = g.add_node(Gender::Female);
    std::vector<RelationType> multiset;
    for (int i = 0; i < edges; ++i) {
        const auto next = g.add_node(i % 2 == 0 ? Gender::Male : Gender::Female);
        g.add_edge(prev, next, "friend", std::nullopt);
        multiset.push_back("friend");
        prev = next;
    }
    g.set_schema_multiset(multiset);
    name_plainly(g);
    return g;
}

TaskGraph star_graph(int leaves) {
    TaskGraph g(0);
    const auto hub = g.add_node(Gender::Male);
    std::vector<RelationType> multiset;
    for (int i = 0; i < leaves; ++i) {
        g.add_edge(g.add_node(i % 2 == 0 ? Gender::Female : Gender::Male), hub, "friend", std::nullopt);
        multiset.push_back("friend");
    }
    g.set_schema_multiset(multiset);
    name_plainly(g);
    return g;
}

TaskGraph family_graph() {
    // 0 grandfather, 1 mother, 2 child, 3 father, 4 teacher, 5 colleague, 6 aunt
    TaskGraph g(0);
    const auto grandpa = g.add_node(Gender::Male);
    const auto mom = g.add_node(Gender::Female);
    g.add_edge(grandpa, mom, "father", std::nullopt);
    const auto kid = g.add_node(Gender::Male);
    g.add_edge(mom, kid, "mother", std::nullopt);
    const auto dad = g.add_node(Gender::Male);
    g.add_edge(dad, mom, "husband", std::nullopt);
    const auto teacher = g.add_node(Gender::Female);
    g.add_edge(kid, teacher, "student", 2);
    const auto coworker = g.add_node(Gender::Male);
    g.add_edge(dad, coworker, "colleague", std::nullopt);
    const auto aunt = g.add_node(Gender::Female);
    g.add_edge(aunt, mom, "older_sister", 1);
    g.set_schema_multiset({"father", "mother", "husband", "student", "colleague", "older_sister"});
    const char* names[] = {"Jianguo", "Meiling", "Xiaoming", "Zhiqiang", "Xiaohong", "Wenjie", "Lihua"};
    for (std::uint32_t i = 0; i < g.nodes().size(); ++i) g.node(NodeId{i}).name = names[i];
    return g;
}

void name_plainly(TaskGraph& graph) {
    for (std::uint32_t i = 0; i < graph.nodes().size(); ++i) {
        std::string name = "Person";
        for (std::uint32_t v = i;; v /= 26) {
            name += static_cast<char>('a' + v % 26);
            if (v < 26) break;
        }
        graph.node(NodeId{i}).name = name;
    }
}

int enumerated_distance(const TaskGraph& graph, NodeId a, NodeId b) {
    if (a == b) return 0;
    int best = -1;
    std::vector<bool> on_path(graph.nodes().size(), false);
    std::function<void(NodeId, int)> walk = [&](NodeId at, int length) {
        if (at == b) {
            if (best < 0 || length < best) best = length;
            return;
        }
        on_path[at.value] = true;
        for (const auto i : graph.incident(at)) {
            const auto next = graph.edges()[i].other(at);
            if (!on_path[next.value]) walk(next, length + 1);
        }
        on_path[at.value] = false;
    };
    walk(a, 0);
    return best;
}

bool some_valid_construction(const SchemaRegistry& registry, const std::vector<RelationType>& relations) {
    auto order = relations;
    std::sort(order.begin(), order.end());
    const auto genders_for = [](GenderConstraint c) {
        std::vector<Gender> out;
        for (const auto g : {Gender::Female, Gender::Male}) {
            if (admits(c, g)) out.push_back(g);
        }
        return out;
    };
    const auto ordinals_for = [&](const RelationType& r) {
        return registry.lookup(r).ordinal() ? std::vector<std::optional<int>>{1, 2, 3, 4}
                                            : std::vector<std::optional<int>>{std::nullopt};
    };
    std::function<bool(TaskGraph&, std::size_t)> extend = [&](TaskGraph& g, std::size_t k) {
        std::vector<RelationType> prefix(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        g.set_schema_multiset(prefix);
        if (!graph_violations(g, registry).empty()) return false;
        if (k == order.size()) return true;
        const auto& entry = registry.lookup(order[k]);
        const auto node_count = static_cast<std::uint32_t>(g.nodes().size());
        for (std::uint32_t existing = 0; existing < node_count; ++existing) {
            for (const bool existing_is_head : {true, false}) {
                const auto new_side = existing_is_head ? entry.tail : entry.head;
                for (const auto gender : genders_for(new_side)) {
                    for (const auto ordinal : ordinals_for(order[k])) {
                        const auto fresh = g.add_node(gender);
                        const NodeId old{existing};
                        if (existing_is_head) g.add_edge(old, fresh, order[k], ordinal);
                        else g.add_edge(fresh, old, order[k], ordinal);
                        const bool ok = extend(g, k + 1);
                        g.pop_edge();
                        if (ok) return true;
                    }
                }
            }
        }
        return false;
    };
    do {
        const auto& first = registry.lookup(order.front());
        for (const auto hg : genders_for(first.head)) {
            for (const auto tg : genders_for(first.tail)) {
                for (const auto ordinal : ordinals_for(order.front())) {
                    TaskGraph g(0);
                    const auto h = g.add_node(hg);
                    const auto t = g.add_node(tg);
                    g.add_edge(h, t, order.front(), ordinal);
                    if (extend(g, 1)) return true;
                }
            }
        }
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
}

std::string RecordingAdapter::submit(const std::string& session, std::span<const Message> history) {
    std::lock_guard lock(mutex_);
    calls_.push_back(Call{session, std::vector<Message>(history.begin(), history.end())});
    return "OK.";
}

std::vector<RecordingAdapter::Call> RecordingAdapter::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

} // namespace relgraph::testkit
