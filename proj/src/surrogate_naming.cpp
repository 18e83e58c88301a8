#include "relgraph/surrogate_naming.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace relgraph {

SurrogateLibrary SurrogateLibrary::load(std::string_view document) {
    const auto lines = text::data_lines(document);
    if (lines.empty() || text::trim(lines.front()) != "name|gender") {
        throw MalformedSurrogateFile("surrogate file must start with the header 'name|gender'");
    }
    SurrogateLibrary lib;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = text::split(lines[i], '|');
        const auto where = "surrogate line " + std::to_string(i + 1);
        if (f.size() != 2) {
            throw MalformedSurrogateFile(where + ": expected 'name|gender'");
        }
        const auto& name = f[0];
        const bool token = !name.empty() && std::all_of(name.begin(), name.end(), [](unsigned char c) {
            return std::isalpha(c) != 0;
        });
        if (!token) {
            throw MalformedSurrogateFile(where + ": names must be single alphabetic tokens");
        }
        const auto gender = parse_gender_code(f[1]);
        if (!gender) {
            throw MalformedSurrogateFile(where + ": gender must be 0 or 1");
        }
        if (!seen.insert(name).second) {
            throw MalformedSurrogateFile(where + ": duplicate name " + name);
        }
        lib.entries_.push_back(Surrogate{name, *gender});
    }
    return lib;
}

const SurrogateLibrary& SurrogateLibrary::builtin() {
    static const SurrogateLibrary lib = load(data::kSurrogates);
    return lib;
}

std::vector<std::string> SurrogateLibrary::names(Gender g) const {
    std::vector<std::string> out;
    for (const auto& s : entries_) {
        if (s.gender == g) out.push_back(s.name);
    }
    return out;
}

std::size_t SurrogateLibrary::count(Gender g) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [g](const Surrogate& s) { return s.gender == g; }));
}

void assign_names(TaskGraph& graph, const SurrogateLibrary& library, Rng& rng) {
    std::vector<NodeId> order;
    std::vector<bool> listed(graph.nodes().size(), false);
    auto visit = [&](NodeId n) {
        if (!listed[n.value]) {
            listed[n.value] = true;
            order.push_back(n);
        }
    };
    for (const auto& e : graph.edges()) {
        visit(e.head);
        visit(e.tail);
    }
    for (const auto& n : graph.nodes()) visit(n.id);

    for (const Gender g : {Gender::Female, Gender::Male}) {
        const auto needed = static_cast<std::size_t>(std::count_if(
            graph.nodes().begin(), graph.nodes().end(), [g](const Node& n) { return n.gender == g; }));
        const auto available = library.count(g);
        if (needed > 0 && available == 0) {
            throw EmptyGenderPool("no " + std::string(gender_name(g)) + " names in the surrogate library");
        }
        if (needed > available) {
            throw InsufficientSurrogates("need " + std::to_string(needed) + " " + std::string(gender_name(g)) +
                                         " names, library has " + std::to_string(available));
        }
    }
    std::vector<std::string> pools[2] = {library.names(Gender::Female), library.names(Gender::Male)};
    for (const NodeId id : order) {
        auto& pool = pools[static_cast<int>(graph.node(id).gender)];
        const auto i = static_cast<std::size_t>(rng.below(pool.size()));
        graph.node(id).name = pool[i];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    }
}

void finalize_ordinals(TaskGraph& graph, Rng& rng) {
    const auto& registry = SchemaRegistry::builtin();
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const Edge& e = graph.edges()[i];
        const auto* schema = registry.find(e.relation);
        if (schema == nullptr || !schema->ordinal() || e.ordinal) continue;
        std::set<int> used;
        for (const auto& o : graph.edges()) {
            if (o.relation == e.relation && o.ordinal && (o.head == e.head || o.tail == e.tail)) {
                used.insert(*o.ordinal);
            }
        }
        std::vector<int> options;
        for (int v = 1; v <= kMaxOrdinal; ++v) {
            if (used.count(v) == 0) options.push_back(v);
        }
        // More than four siblings in one group cannot happen in generated
        // graphs; hand-built ones fall back to the next unused number.
        int value = kMaxOrdinal + 1;
        while (options.empty() && used.count(value) > 0) ++value;
        graph.set_ordinal(i, options.empty() ? value : rng.pick(std::span<const int>(options)));
    }
}

} // namespace relgraph
