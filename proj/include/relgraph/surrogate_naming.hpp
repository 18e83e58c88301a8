#pragma once

#include "relgraph/rng.hpp"
#include "relgraph/task_graph.hpp"

#include <string>
#include <vector>

namespace relgraph {

struct Surrogate {
    std::string name;
    Gender gender = Gender::Female;

    friend bool operator==(const Surrogate&, const Surrogate&) = default;
};

/// Pool of (name, gender) pairs used to anonymize graph nodes.
class SurrogateLibrary {
public:
    /// `name|gender_code` records after a `name|gender` header. Names must be
    /// unique single tokens. Throws MalformedSurrogateFile.
    static SurrogateLibrary load(std::string_view document);
    static const SurrogateLibrary& builtin();

    const std::vector<Surrogate>& entries() const { return entries_; }
    /// Names of one gender in file order.
    std::vector<std::string> names(Gender g) const;
    std::size_t count(Gender g) const;

private:
    std::vector<Surrogate> entries_;
};

/// Names every node, visiting nodes in order of first appearance along the
/// edge list and drawing uniformly without replacement from the node's
/// gender pool. Throws EmptyGenderPool or InsufficientSurrogates.
void assign_names(TaskGraph& graph, const SurrogateLibrary& library, Rng& rng);

/// Gives every ordinal relation edge without an ordinal a free value in
/// 1..4, distinct within its (head, relation) and (tail, relation) groups.
/// Edges that already carry an ordinal keep it.
void finalize_ordinals(TaskGraph& graph, Rng& rng);

} // namespace relgraph
