#include "relgraph/kinship.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <cctype>

namespace relgraph {

namespace {

struct KinRelation {
    std::string_view relation;
    StepKind forward;
    Gender head_gender;
    Age age; // age of the head relative to the tail
};

constexpr KinRelation kKinTable[] = {
    {"father", StepKind::Parent, Gender::Male, Age::Unknown},
    {"mother", StepKind::Parent, Gender::Female, Age::Unknown},
    {"son", StepKind::Child, Gender::Male, Age::Unknown},
    {"daughter", StepKind::Child, Gender::Female, Age::Unknown},
    {"older_brother", StepKind::Sibling, Gender::Male, Age::Older},
    {"younger_brother", StepKind::Sibling, Gender::Male, Age::Younger},
    {"older_sister", StepKind::Sibling, Gender::Female, Age::Older},
    {"younger_sister", StepKind::Sibling, Gender::Female, Age::Younger},
    {"husband", StepKind::Spouse, Gender::Male, Age::Unknown},
    {"wife", StepKind::Spouse, Gender::Female, Age::Unknown},
};

const KinRelation* kin_entry(std::string_view relation) {
    for (const auto& k : kKinTable) {
        if (k.relation == relation) {
            return &k;
        }
    }
    return nullptr;
}

StepKind inverse_kind(StepKind k) {
    switch (k) {
    case StepKind::Parent: return StepKind::Child;
    case StepKind::Child: return StepKind::Parent;
    default: return k;
    }
}

Age flip(Age a) {
    switch (a) {
    case Age::Older: return Age::Younger;
    case Age::Younger: return Age::Older;
    default: return Age::Unknown;
    }
}

Age compose_age(Age first, Age second) {
    return first == second ? first : Age::Unknown;
}

std::string_view age_token(Age a) {
    switch (a) {
    case Age::Older: return "older";
    case Age::Younger: return "younger";
    default: return "-";
    }
}

std::string_view affinity_token(Affinity a) {
    switch (a) {
    case Affinity::Blood: return "blood";
    case Affinity::Spouse: return "spouse";
    case Affinity::SpouseKin: return "spouse_kin";
    case Affinity::KinSpouse: return "kin_spouse";
    }
    return "?";
}

std::string_view lineage_token(Lineage l) {
    switch (l) {
    case Lineage::Paternal: return "paternal";
    case Lineage::Maternal: return "maternal";
    default: return "-";
    }
}

} // namespace

bool is_kin_relation(std::string_view relation) {
    return kin_entry(relation) != nullptr;
}

const std::vector<RelationType>& kin_relations() {
    static const std::vector<RelationType> all = [] {
        std::vector<RelationType> v;
        for (const auto& k : kKinTable) {
            v.emplace_back(k.relation);
        }
        return v;
    }();
    return all;
}

std::optional<KinStep> kin_step(std::string_view relation, Orientation orientation, Gender next_gender) {
    const auto* k = kin_entry(relation);
    if (k == nullptr) {
        return std::nullopt;
    }
    if (orientation == Orientation::Forward) {
        if (next_gender != k->head_gender) {
            return std::nullopt;
        }
        return KinStep{k->forward, next_gender, k->age};
    }
    return KinStep{inverse_kind(k->forward), next_gender, flip(k->age)};
}

std::string KinCoordinate::key() const {
    std::string out(affinity_token(affinity));
    out += ':' + std::to_string(up) + ':' + std::to_string(down) + ':';
    out += lineage_token(side);
    out += ':';
    out += age_token(age);
    out += ':';
    out += gender_name(gender);
    return out;
}

std::optional<KinCoordinate> parse_kin_key(std::string_view key) {
    const auto f = text::split(key, ':');
    if (f.size() != 6) {
        return std::nullopt;
    }
    KinCoordinate c;
    if (f[0] == "blood") c.affinity = Affinity::Blood;
    else if (f[0] == "spouse") c.affinity = Affinity::Spouse;
    else if (f[0] == "spouse_kin") c.affinity = Affinity::SpouseKin;
    else if (f[0] == "kin_spouse") c.affinity = Affinity::KinSpouse;
    else return std::nullopt;
    auto small_int = [](const std::string& s) -> std::optional<int> {
        if (s.empty() || s.size() > 2 || !std::all_of(s.begin(), s.end(), ::isdigit)) {
            return std::nullopt;
        }
        return std::stoi(s);
    };
    const auto up = small_int(f[1]);
    const auto down = small_int(f[2]);
    if (!up || !down) {
        return std::nullopt;
    }
    c.up = *up;
    c.down = *down;
    if (f[3] == "paternal") c.side = Lineage::Paternal;
    else if (f[3] == "maternal") c.side = Lineage::Maternal;
    else if (f[3] != "-") return std::nullopt;
    if (f[4] == "older") c.age = Age::Older;
    else if (f[4] == "younger") c.age = Age::Younger;
    else if (f[4] != "-") return std::nullopt;
    if (f[5] == "male") c.gender = Gender::Male;
    else if (f[5] == "female") c.gender = Gender::Female;
    else return std::nullopt;
    return c;
}

std::string to_string(const KinOutcome& outcome) {
    switch (outcome.kind) {
    case KinOutcomeKind::Coordinate: return outcome.coordinate->key();
    case KinOutcomeKind::NoCoordinate: return "no-coordinate";
    case KinOutcomeKind::Unsatisfiable: return "unsatisfiable";
    }
    return "?";
}

KinWalk::KinWalk(Gender start) : gender_(start) {}

KinWalk::Net KinWalk::current_net() const {
    if (entry_role_ == Role::Child) {
        return role_ == Role::Child ? Net::Sib : Net::Up;
    }
    return role_ == Role::Parent ? Net::Spouse : Net::Down;
}

void KinWalk::enter_family(Role entry) {
    if (started_) {
        done_.push_back(Segment{current_net(), gender_});
    }
    started_ = true;
    entry_role_ = entry;
    role_ = entry;
    father_visited_ = entry == Role::Parent && gender_ == Gender::Male;
    mother_visited_ = entry == Role::Parent && gender_ == Gender::Female;
    age_vs_entry_ = Age::Unknown;
}

bool KinWalk::step(const KinStep& s) {
    if (unsat_) {
        return false;
    }
    // Parent and sibling moves happen in the birth family, child and spouse
    // moves in the marital family. The walk stays in the current family when
    // the current person holds the matching role there.
    const bool birth = s.kind == StepKind::Parent || s.kind == StepKind::Sibling;
    const Role needed = birth ? Role::Child : Role::Parent;
    const bool at_entry = !started_ || role_ != needed;
    if (at_entry) {
        enter_family(needed);
    }

    switch (s.kind) {
    case StepKind::Parent: {
        bool& slot = s.gender == Gender::Male ? father_visited_ : mother_visited_;
        if (slot) {
            unsat_ = true;
            return false;
        }
        slot = true;
        role_ = Role::Parent;
        break;
    }
    case StepKind::Spouse: {
        if (s.gender == gender_) {
            unsat_ = true;
            return false;
        }
        bool& slot = s.gender == Gender::Male ? father_visited_ : mother_visited_;
        if (slot) {
            unsat_ = true;
            return false;
        }
        slot = true;
        role_ = Role::Parent;
        break;
    }
    case StepKind::Sibling:
        // Birth order along a run of sibling moves is only determined when
        // every move points the same way.
        age_vs_entry_ = at_entry ? s.age : compose_age(age_vs_entry_, s.age);
        role_ = Role::Child;
        break;
    case StepKind::Child:
        age_vs_entry_ = Age::Unknown;
        role_ = Role::Child;
        break;
    }
    gender_ = s.gender;
    return true;
}

KinOutcome KinWalk::outcome() const {
    if (unsat_) {
        return {KinOutcomeKind::Unsatisfiable, std::nullopt};
    }
    if (!started_) {
        return {KinOutcomeKind::NoCoordinate, std::nullopt};
    }
    std::vector<Segment> word = done_;
    word.push_back(Segment{current_net(), gender_});

    KinCoordinate c;
    c.gender = gender_;
    if (word.size() == 1 && word.front().net == Net::Spouse) {
        c.affinity = Affinity::Spouse;
        return {KinOutcomeKind::Coordinate, c};
    }
    const bool spouse_first = word.front().net == Net::Spouse;
    const bool spouse_last = word.back().net == Net::Spouse;
    if (spouse_first && spouse_last) {
        return {KinOutcomeKind::NoCoordinate, std::nullopt};
    }
    const auto core_begin = word.begin() + (spouse_first ? 1 : 0);
    const auto core_end = word.end() - (spouse_last ? 1 : 0);

    int ups = 0;
    int downs = 0;
    bool sib = false;
    for (auto it = core_begin; it != core_end; ++it) {
        switch (it->net) {
        case Net::Up:
            if (sib || downs > 0) return {KinOutcomeKind::NoCoordinate, std::nullopt};
            ++ups;
            break;
        case Net::Sib:
            if (sib || downs > 0) return {KinOutcomeKind::NoCoordinate, std::nullopt};
            sib = true;
            break;
        case Net::Down:
            ++downs;
            break;
        case Net::Spouse:
            return {KinOutcomeKind::NoCoordinate, std::nullopt};
        }
    }
    c.affinity = spouse_first ? Affinity::SpouseKin : (spouse_last ? Affinity::KinSpouse : Affinity::Blood);
    c.up = ups + (sib ? 1 : 0);
    c.down = downs + (sib ? 1 : 0);
    if (c.affinity != Affinity::SpouseKin && c.up >= 2) {
        c.side = core_begin->end_gender == Gender::Male ? Lineage::Paternal : Lineage::Maternal;
    }
    if (c.affinity == Affinity::Blood && word.size() == 1 && sib) {
        c.age = age_vs_entry_;
    }
    return {KinOutcomeKind::Coordinate, c};
}

KinOutcome compose_kin(Gender start, std::span<const KinStep> steps) {
    KinWalk walk(start);
    for (const auto& s : steps) {
        if (!walk.step(s)) {
            break;
        }
    }
    return walk.outcome();
}

std::string LexiconEntry::vocative() const {
    std::string out = synonyms.empty() ? canonical : synonyms.front();
    bool word_start = true;
    for (auto& ch : out) {
        if (word_start && std::isalpha(static_cast<unsigned char>(ch))) {
            ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        }
        word_start = ch == ' ' || ch == '-';
    }
    return out;
}

Lexicon Lexicon::load(std::string_view document) {
    const auto lines = text::data_lines(document);
    if (lines.empty() || text::trim(lines.front()) != "key|canonical|synonyms") {
        throw MalformedLexiconFile("lexicon must start with the header 'key|canonical|synonyms'");
    }
    Lexicon lex;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = text::split(lines[i], '|');
        const auto where = "lexicon line " + std::to_string(i + 1);
        if (f.size() != 3) {
            throw MalformedLexiconFile(where + ": expected 3 fields");
        }
        const auto coord = parse_kin_key(f[0]);
        if (!coord || coord->key() != f[0]) {
            throw MalformedLexiconFile(where + ": bad coordinate key '" + f[0] + "'");
        }
        if (text::trim(f[1]).empty()) {
            throw MalformedLexiconFile(where + ": empty canonical term");
        }
        LexiconEntry e{f[0], f[1], {}};
        if (!f[2].empty()) {
            for (auto& s : text::split(f[2], ',')) {
                if (s.empty() || s == e.canonical) {
                    throw MalformedLexiconFile(where + ": synonyms must be non-empty and differ from the canonical term");
                }
                e.synonyms.push_back(std::move(s));
            }
        }
        if (!lex.index_.emplace(e.key, lex.entries_.size()).second) {
            throw MalformedLexiconFile(where + ": duplicate key " + e.key);
        }
        lex.entries_.push_back(std::move(e));
    }
    return lex;
}

const Lexicon& Lexicon::builtin() {
    static const Lexicon lex = load(data::kLexicon);
    return lex;
}

const LexiconEntry* Lexicon::find(std::string_view key) const {
    const auto it = index_.find(std::string(key));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

} // namespace relgraph
