#pragma once

#include "relgraph/schema_registry.hpp"

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relgraph {

/// How an edge is traversed when walking from one person to the next.
/// Forward: the next person is `relation` of the current one (tail -> head).
enum class Orientation : std::uint8_t { Forward, Inverse };

enum class StepKind : std::uint8_t { Parent, Child, Sibling, Spouse };

enum class Age : std::uint8_t { Unknown, Older, Younger };

/// One genealogical move; `gender` is the gender of the person reached.
struct KinStep {
    StepKind kind = StepKind::Parent;
    Gender gender = Gender::Male;
    Age age = Age::Unknown; // siblings only: age of the reached person relative to the current one

    friend bool operator==(const KinStep&, const KinStep&) = default;
};

/// The ten family relations that take part in kinship composition.
bool is_kin_relation(std::string_view relation);
const std::vector<RelationType>& kin_relations();

/// Kin step for traversing `relation` in the given orientation, arriving at
/// a person of `next_gender`; nullopt for non-kin relations or when the
/// gender contradicts the relation (forward "father" reaching a woman).
std::optional<KinStep> kin_step(std::string_view relation, Orientation orientation, Gender next_gender);

enum class Affinity : std::uint8_t {
    Blood,     // shared ancestry
    Spouse,    // the spouse
    SpouseKin, // blood relative of the spouse (father-in-law)
    KinSpouse, // spouse of a blood relative (daughter-in-law)
};

enum class Lineage : std::uint8_t { None, Paternal, Maternal };

/// Position of one person relative to another in a naive genealogy.
///
/// Blood relatives are located by generations `up` to the nearest common
/// ancestor couple and `down` from it; side records which parent the line
/// runs through (only for up >= 2), age the birth order for full siblings.
struct KinCoordinate {
    Affinity affinity = Affinity::Blood;
    int up = 0;
    int down = 0;
    Lineage side = Lineage::None;
    Age age = Age::Unknown;
    Gender gender = Gender::Male;

    /// Lexicon key, e.g. "blood:2:0:maternal:-:male".
    std::string key() const;

    friend auto operator<=>(const KinCoordinate&, const KinCoordinate&) = default;
};

std::optional<KinCoordinate> parse_kin_key(std::string_view key);

enum class KinOutcomeKind : std::uint8_t {
    Coordinate,    // a single position (age may be Unknown)
    NoCoordinate,  // consistent, but outside the coordinate space (co-parents-in-law, ...)
    Unsatisfiable, // no naive genealogy with distinct people realizes the chain
};

struct KinOutcome {
    KinOutcomeKind kind = KinOutcomeKind::NoCoordinate;
    std::optional<KinCoordinate> coordinate;

    friend bool operator==(const KinOutcome&, const KinOutcome&) = default;
};

std::string to_string(const KinOutcome& outcome);

/// Left fold of kin steps over a small family-walk state.
///
/// The model: everyone has one father and one mother who are married to
/// each other, marriages are monogamous and opposite-sex, full siblings
/// share both parents and have a strict birth order, and every person on
/// the walk is distinct. A walk then never re-enters a nuclear family it
/// has left, so the state only needs the family currently being walked,
/// who in it has been visited, and the net moves of the families left
/// behind.
class KinWalk {
public:
    explicit KinWalk(Gender start);

    /// Returns false once the walk is unsatisfiable; further steps are ignored.
    bool step(const KinStep& s);

    bool satisfiable() const { return !unsat_; }
    Gender current_gender() const { return gender_; }
    KinOutcome outcome() const;

private:
    enum class Role : std::uint8_t { Child, Parent };
    enum class Net : std::uint8_t { Up, Down, Sib, Spouse };

    struct Segment {
        Net net;
        Gender end_gender;
    };

    Net current_net() const;
    void enter_family(Role entry);

    Gender gender_;
    bool started_ = false;
    bool unsat_ = false;
    Role entry_role_ = Role::Child;
    Role role_ = Role::Child;
    bool father_visited_ = false;
    bool mother_visited_ = false;
    Age age_vs_entry_ = Age::Unknown;
    std::vector<Segment> done_;
};

KinOutcome compose_kin(Gender start, std::span<const KinStep> steps);

struct LexiconEntry {
    std::string key;
    std::string canonical;
    std::vector<std::string> synonyms;

    /// Form of address used in "Should A call Grandma B?": the first
    /// synonym (or the canonical term), capitalized.
    std::string vocative() const;

    friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Coordinate-key -> kin term table.
class Lexicon {
public:
    /// `key|canonical|synonym,synonym,...` records after a header line.
    static Lexicon load(std::string_view document);
    static const Lexicon& builtin();

    const LexiconEntry* find(std::string_view key) const;
    const LexiconEntry* find(const KinCoordinate& c) const { return find(c.key()); }
    const std::vector<LexiconEntry>& entries() const { return entries_; }

private:
    std::vector<LexiconEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace relgraph
