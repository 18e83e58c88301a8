#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relgraph {

enum class Gender : std::uint8_t { Female = 0, Male = 1 };

enum class GenderConstraint : std::uint8_t { FemaleOnly = 0, MaleOnly = 1, Any = 2 };

constexpr bool admits(GenderConstraint c, Gender g) {
    switch (c) {
    case GenderConstraint::FemaleOnly: return g == Gender::Female;
    case GenderConstraint::MaleOnly: return g == Gender::Male;
    case GenderConstraint::Any: return true;
    }
    return false;
}

constexpr Gender opposite(Gender g) { return g == Gender::Male ? Gender::Female : Gender::Male; }

std::string_view gender_name(Gender g);
/// "0"/"1" as used by the data files.
char gender_code(Gender g);
std::optional<Gender> parse_gender_code(std::string_view code);

enum class CurrentOrder : std::uint8_t { NoOrder, SingleCurrent, OrdinalCurrent };

struct OrderSpec {
    CurrentOrder current = CurrentOrder::NoOrder;
    bool former_allowed = false;

    friend bool operator==(const OrderSpec&, const OrderSpec&) = default;
};

/// Table codes "0", "1", "+", "1/-", "+/-".
std::optional<OrderSpec> parse_order_code(std::string_view code);
std::string order_code(OrderSpec spec);

enum class Direction : std::uint8_t { Directed = 1, Symmetric = 2 };

/// Stable lowercase token, e.g. "sworn_elder_brother".
using RelationType = std::string;

/// Human-readable form of a relation token ("older_sister" -> "older sister").
std::string display_name(std::string_view relation);

struct SchemaEntry {
    int id = 0;
    GenderConstraint head = GenderConstraint::Any;
    GenderConstraint tail = GenderConstraint::Any;
    RelationType relation;
    OrderSpec order;
    Direction direction = Direction::Directed;

    bool ordinal() const { return order.current == CurrentOrder::OrdinalCurrent; }
    bool single_current() const { return order.current == CurrentOrder::SingleCurrent; }
    bool symmetric() const { return direction == Direction::Symmetric; }

    friend bool operator==(const SchemaEntry&, const SchemaEntry&) = default;
};

/// Intrinsic gender of the head of a relation for the relation names the
/// registry knows about (wife -> Female, father -> Male, friend -> nullopt).
/// Relations outside the built-in vocabulary return nullopt as well.
std::optional<Gender> intrinsic_head_gender(std::string_view relation);

/// The basic relationship schemas. Immutable once loaded.
class SchemaRegistry {
public:
    /// Parses and validates a schema document (header line plus
    /// `id|head|tail|relation|order|direction` records).
    /// Throws MalformedSchemaFile or SchemaInvariantViolation.
    static SchemaRegistry load(std::string_view document);

    /// The schema table shipped with the library.
    static const SchemaRegistry& builtin();

    const SchemaEntry& lookup(std::string_view relation) const;
    const SchemaEntry* find(std::string_view relation) const;
    const SchemaEntry& by_id(int id) const;

    const std::vector<SchemaEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Document that load() turns back into an equal registry.
    std::string serialize() const;

    friend bool operator==(const SchemaRegistry&, const SchemaRegistry&) = default;

private:
    std::vector<SchemaEntry> entries_; // sorted by id
};

} // namespace relgraph
