#pragma once

#include "relgraph/kinship.hpp"
#include "relgraph/rng.hpp"
#include "relgraph/task_graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace relgraph {

/// One edge as seen while walking from one person to the next.
/// Forward: the next person is `relation` of the current one.
/// Symmetric relations are always Forward.
struct RelationAtom {
    RelationType relation;
    Orientation orientation = Orientation::Forward;
    std::optional<int> ordinal;

    friend bool operator==(const RelationAtom&, const RelationAtom&) = default;
};

struct RelationChain {
    NodeId from;
    NodeId to;
    std::vector<RelationAtom> atoms;
    std::vector<NodeId> path;   // atoms.size() + 1 nodes, from .. to
    std::vector<Gender> genders; // parallel to path

    friend bool operator==(const RelationChain&, const RelationChain&) = default;
};

enum class DesignationKind : std::uint8_t { KinTerm, ChainDescription };

/// What one person is to another. Chain descriptions are phrased relative
/// to a placeholder asker "A" ("the wife of A's teacher").
struct Designation {
    std::string canonical;
    std::vector<std::string> synonyms;
    DesignationKind kind = DesignationKind::ChainDescription;
    std::string lexicon_key; // empty for chain descriptions

    /// Form of address: first synonym or the canonical term, capitalized.
    std::string vocative() const;
    /// canonical with the placeholder asker replaced by a name.
    std::string phrase_for(const std::string& asker) const;

    friend bool operator==(const Designation&, const Designation&) = default;
};

inline constexpr std::string_view kAskerPlaceholder = "A's ";

/// Undirected shortest-path edge count.
int distance(const TaskGraph& graph, NodeId a, NodeId b);
/// Matrix of pairwise distances; -1 for unreachable pairs.
std::vector<std::vector<int>> all_distances(const TaskGraph& graph);

/// Atoms along a shortest a->b path; among equal-length paths the one whose
/// sequence of edge insertion indices is lexicographically smallest.
RelationChain relation_chain(const TaskGraph& graph, NodeId a, NodeId b);

/// Name of the role the next person plays, e.g. an Inverse "student" atom
/// reaching a man gives "teacher", an Inverse "father" atom reaching a
/// woman gives "daughter".
std::string role_name(const RelationAtom& atom, Gender next_gender);

/// Kin outcome of an all-kin chain given the gender of every person on it;
/// nullopt when some atom is not a kin relation.
std::optional<KinOutcome> chain_kin_outcome(const std::vector<RelationAtom>& atoms,
                                            const std::vector<Gender>& genders);

/// What chain.to is to chain.from.
Designation compose_designation(const RelationChain& chain, const Lexicon& lexicon = Lexicon::builtin());

enum class QuestionForm : int {
    Relationship = 1,      // What's the relationship between A and B?
    Appellation = 2,       // What should A call B?
    AssertRelation = 3,    // Is there an x-y relationship between A and B?
    AssertAppellation = 4, // Should A call <Vocative> B?
};

struct GroundTruth {
    Designation designation_ab; // what B is to A
    Designation designation_ba; // what A is to B
    std::optional<bool> boolean_answer; // forms 3 and 4
    RelationChain chain;
    std::string probe_x; // form 3: asserted term for B; form 4: vocative
    std::string probe_y; // form 3: asserted term for A

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

/// Truth for a question about (a, b). Forms 3 and 4 draw a probe from `rng`:
/// a true one on a coin flip when the truth is expressible, else a false one.
GroundTruth ground_truth_for(const TaskGraph& graph, NodeId a, NodeId b, QuestionForm form, Rng& rng,
                             const Lexicon& lexicon = Lexicon::builtin());

/// Rebuilds the truth for a stored probe without drawing randomness.
GroundTruth ground_truth_with_probe(const TaskGraph& graph, NodeId a, NodeId b, QuestionForm form,
                                    std::string probe_x, std::string probe_y,
                                    const Lexicon& lexicon = Lexicon::builtin());

/// Whether an asserted probe is true for the given designations.
bool probe_holds(QuestionForm form, const Designation& ab, const Designation& ba, const std::string& probe_x,
                 const std::string& probe_y);

/// Distinct (what B is to A, what A is to B) kin-term pairs over all forward
/// kin chains of length 1 and 2.
std::vector<std::pair<std::string, std::string>> relation_probe_pool(const Lexicon& lexicon);

/// Distinct lexicon vocatives in lexicon order.
std::vector<std::string> vocative_pool(const Lexicon& lexicon);

} // namespace relgraph
