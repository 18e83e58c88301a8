#include "relgraph/schema_registry.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace relgraph {

std::string_view gender_name(Gender g) {
    return g == Gender::Male ? "male" : "female";
}

char gender_code(Gender g) {
    return g == Gender::Male ? '1' : '0';
}

std::optional<Gender> parse_gender_code(std::string_view code) {
    if (code == "0") {
        return Gender::Female;
    }
    if (code == "1") {
        return Gender::Male;
    }
    return std::nullopt;
}

std::optional<OrderSpec> parse_order_code(std::string_view code) {
    if (code == "0") return OrderSpec{CurrentOrder::NoOrder, false};
    if (code == "1") return OrderSpec{CurrentOrder::SingleCurrent, false};
    if (code == "+") return OrderSpec{CurrentOrder::OrdinalCurrent, false};
    if (code == "1/-") return OrderSpec{CurrentOrder::SingleCurrent, true};
    if (code == "+/-") return OrderSpec{CurrentOrder::OrdinalCurrent, true};
    return std::nullopt;
}

std::string order_code(OrderSpec spec) {
    std::string base;
    switch (spec.current) {
    case CurrentOrder::NoOrder: return "0";
    case CurrentOrder::SingleCurrent: base = "1"; break;
    case CurrentOrder::OrdinalCurrent: base = "+"; break;
    }
    return spec.former_allowed ? base + "/-" : base;
}

std::string display_name(std::string_view relation) {
    std::string out(relation);
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::optional<Gender> intrinsic_head_gender(std::string_view relation) {
    static constexpr std::array<std::string_view, 10> female = {
        "wife", "girlfriend", "mother", "daughter", "younger_sister", "older_sister",
        "sworn_elder_sister", "sworn_younger_sister", "goddaughter", "godmother"};
    static constexpr std::array<std::string_view, 10> male = {
        "husband", "boyfriend", "father", "son", "younger_brother", "older_brother",
        "sworn_elder_brother", "sworn_younger_brother", "godson", "godfather"};
    if (std::find(female.begin(), female.end(), relation) != female.end()) {
        return Gender::Female;
    }
    if (std::find(male.begin(), male.end(), relation) != male.end()) {
        return Gender::Male;
    }
    return std::nullopt;
}

namespace {

std::optional<GenderConstraint> parse_constraint(std::string_view code) {
    if (code == "0") return GenderConstraint::FemaleOnly;
    if (code == "1") return GenderConstraint::MaleOnly;
    if (code == "2") return GenderConstraint::Any;
    return std::nullopt;
}

char constraint_code(GenderConstraint c) {
    return static_cast<char>('0' + static_cast<int>(c));
}

bool valid_token(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || c == '_';
    });
}

[[noreturn]] void violation(const SchemaEntry& e, const std::string& what) {
    throw SchemaInvariantViolation("schema row " + std::to_string(e.id) + " (" + e.relation + "): " + what);
}

void check_coherence(const SchemaEntry& e) {
    if (e.symmetric()) {
        if (e.head != GenderConstraint::Any || e.tail != GenderConstraint::Any) {
            violation(e, "symmetric relation must admit any gender at both ends");
        }
        return;
    }
    if (auto g = intrinsic_head_gender(e.relation)) {
        const auto expected = *g == Gender::Female ? GenderConstraint::FemaleOnly : GenderConstraint::MaleOnly;
        if (e.head != expected) {
            violation(e, "head gender contradicts the relation's intrinsic gender");
        }
    }
}

} // namespace

SchemaRegistry SchemaRegistry::load(std::string_view document) {
    const auto lines = text::data_lines(document);
    if (lines.empty()) {
        throw MalformedSchemaFile("schema document is empty");
    }
    if (text::trim(lines.front()) != "id|head|tail|relation|order|direction") {
        throw MalformedSchemaFile("unexpected schema header: " + lines.front());
    }
    SchemaRegistry reg;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = text::split(lines[i], '|');
        const auto where = "schema line " + std::to_string(i + 1);
        if (fields.size() != 6) {
            throw MalformedSchemaFile(where + ": expected 6 fields");
        }
        SchemaEntry e;
        try {
            std::size_t used = 0;
            e.id = std::stoi(fields[0], &used);
            if (used != fields[0].size()) {
                throw MalformedSchemaFile(where + ": bad id");
            }
        } catch (const std::logic_error&) {
            throw MalformedSchemaFile(where + ": bad id");
        }
        auto head = parse_constraint(fields[1]);
        auto tail = parse_constraint(fields[2]);
        auto order = parse_order_code(fields[4]);
        if (!head || !tail) {
            throw MalformedSchemaFile(where + ": gender code must be 0, 1 or 2");
        }
        if (!order) {
            throw MalformedSchemaFile(where + ": unknown order code '" + fields[4] + "'");
        }
        if (!valid_token(fields[3])) {
            throw MalformedSchemaFile(where + ": relation must be a lowercase token");
        }
        if (fields[5] != "1" && fields[5] != "2") {
            throw MalformedSchemaFile(where + ": direction must be 1 or 2");
        }
        e.head = *head;
        e.tail = *tail;
        e.relation = fields[3];
        e.order = *order;
        e.direction = fields[5] == "1" ? Direction::Directed : Direction::Symmetric;
        reg.entries_.push_back(std::move(e));
    }

    std::set<int> ids;
    std::set<std::string> relations;
    for (const auto& e : reg.entries_) {
        if (!ids.insert(e.id).second) {
            violation(e, "duplicate id");
        }
        if (!relations.insert(e.relation).second) {
            violation(e, "duplicate relation type");
        }
        if (e.symmetric() && e.order.current != CurrentOrder::NoOrder) {
            violation(e, "symmetric relation cannot carry an order");
        }
        check_coherence(e);
    }
    std::sort(reg.entries_.begin(), reg.entries_.end(),
              [](const SchemaEntry& a, const SchemaEntry& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < reg.entries_.size(); ++i) {
        if (reg.entries_[i].id != static_cast<int>(i) + 1) {
            violation(reg.entries_[i], "ids must cover 1.." + std::to_string(reg.entries_.size()) + " without gaps");
        }
    }
    if (reg.entries_.empty()) {
        throw MalformedSchemaFile("schema document has no rows");
    }
    return reg;
}

const SchemaRegistry& SchemaRegistry::builtin() {
    static const SchemaRegistry reg = load(data::kSchema);
    return reg;
}

const SchemaEntry* SchemaRegistry::find(std::string_view relation) const {
    for (const auto& e : entries_) {
        if (e.relation == relation) {
            return &e;
        }
    }
    return nullptr;
}

const SchemaEntry& SchemaRegistry::lookup(std::string_view relation) const {
    if (const auto* e = find(relation)) {
        return *e;
    }
    throw UnknownRelationType("unknown relation type '" + std::string(relation) + "'");
}

const SchemaEntry& SchemaRegistry::by_id(int id) const {
    if (id < 1 || id > static_cast<int>(entries_.size())) {
        throw UnknownRelationType("no schema with id " + std::to_string(id));
    }
    return entries_[static_cast<std::size_t>(id - 1)];
}

std::string SchemaRegistry::serialize() const {
    std::string out = "id|head|tail|relation|order|direction\n";
    for (const auto& e : entries_) {
        out += std::to_string(e.id);
        out += '|';
        out += constraint_code(e.head);
        out += '|';
        out += constraint_code(e.tail);
        out += '|';
        out += e.relation;
        out += '|';
        out += order_code(e.order);
        out += '|';
        out += e.symmetric() ? '2' : '1';
        out += '\n';
    }
    return out;
}

} // namespace relgraph
