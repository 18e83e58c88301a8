#include "relgraph/grading.hpp"

#include "relgraph/error.hpp"
#include "relgraph/schema_registry.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <set>

namespace relgraph {

namespace {

using Phrase = std::vector<std::string>;

Phrase phrase(std::string_view s) { return text::tokens(text::normalize(s)); }

bool starts_at(const Phrase& hay, std::size_t pos, const Phrase& needle) {
    if (needle.empty() || pos + needle.size() > hay.size()) return false;
    return std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(pos));
}

bool contains(const Phrase& hay, const Phrase& needle) {
    for (std::size_t i = 0; i < hay.size(); ++i) {
        if (starts_at(hay, i, needle)) return true;
    }
    return false;
}

void add_term(std::set<Phrase>& vocab, std::string_view term) {
    auto p = phrase(term);
    if (!p.empty()) vocab.insert(p);
}

std::set<Phrase> truth_terms(const Designation& d, const std::string& asker) {
    std::set<Phrase> out;
    add_term(out, d.phrase_for(asker));
    add_term(out, d.canonical);
    for (const auto& s : d.synonyms) add_term(out, s);
    return out;
}

/// Kin terms, role names and their plurals.
std::set<Phrase> base_vocabulary(const Lexicon& lexicon) {
    std::set<Phrase> vocab;
    for (const auto& e : lexicon.entries()) {
        add_term(vocab, e.canonical);
        for (const auto& s : e.synonyms) add_term(vocab, s);
    }
    for (const auto& e : SchemaRegistry::builtin().entries()) {
        for (const auto o : {Orientation::Forward, Orientation::Inverse}) {
            for (const Gender g : {Gender::Female, Gender::Male}) {
                const auto name = role_name(RelationAtom{e.relation, o, std::nullopt}, g);
                add_term(vocab, name);
                add_term(vocab, name + "s");
            }
        }
    }
    for (const auto* w : {"parent", "child", "sibling", "spouse", "grandparent", "grandchild", "cousin", "uncle",
                          "aunt", "in law", "relative", "stranger", "strangers"}) {
        add_term(vocab, w);
    }
    return vocab;
}

/// Left-to-right longest-match scan; returns the matched phrases in order.
std::vector<Phrase> mentions(const Phrase& reply, const std::set<Phrase>& vocab) {
    std::vector<Phrase> out;
    std::size_t i = 0;
    while (i < reply.size()) {
        const Phrase* best = nullptr;
        for (const auto& p : vocab) {
            if ((best == nullptr || p.size() > best->size()) && starts_at(reply, i, p)) best = &p;
        }
        if (best != nullptr) {
            out.push_back(*best);
            i += best->size();
        } else {
            ++i;
        }
    }
    return out;
}

/// Role names along a chain, as seen from its start.
std::vector<Phrase> chain_roles(const RelationChain& chain) {
    std::vector<Phrase> roles;
    for (std::size_t i = 0; i < chain.atoms.size(); ++i) {
        roles.push_back(phrase(role_name(chain.atoms[i], chain.genders[i + 1])));
    }
    return roles;
}

RelationChain reverse_chain(const RelationChain& chain) {
    RelationChain r;
    r.genders.assign(chain.genders.rbegin(), chain.genders.rend());
    for (auto it = chain.atoms.rbegin(); it != chain.atoms.rend(); ++it) {
        RelationAtom a = *it;
        const auto* e = SchemaRegistry::builtin().find(a.relation);
        if (e == nullptr || !e->symmetric()) {
            a.orientation = a.orientation == Orientation::Forward ? Orientation::Inverse : Orientation::Forward;
        }
        r.atoms.push_back(a);
    }
    return r;
}

/// "mothers father" or "father of [x [y]] mother".
bool recites_chain(const Phrase& reply, const RelationChain& chain) {
    if (chain.atoms.size() < 2) return false;
    const auto roles = chain_roles(chain);
    Phrase possessive;
    for (std::size_t i = 0; i < roles.size(); ++i) {
        Phrase r = roles[i];
        if (i + 1 < roles.size()) r.back() += "s";
        possessive.insert(possessive.end(), r.begin(), r.end());
    }
    if (contains(reply, possessive)) return true;

    // of-form: roles from last to first joined by "of" plus up to two fillers
    for (std::size_t start = 0; start < reply.size(); ++start) {
        std::size_t pos = start;
        bool ok = starts_at(reply, pos, roles.back());
        if (ok) pos += roles.back().size();
        for (std::size_t k = roles.size() - 1; ok && k-- > 0;) {
            if (pos >= reply.size() || reply[pos] != "of") {
                ok = false;
                break;
            }
            ++pos;
            bool found = false;
            for (std::size_t skip = 0; skip <= 2 && !found; ++skip) {
                if (starts_at(reply, pos + skip, roles[k])) {
                    pos += skip + roles[k].size();
                    found = true;
                }
            }
            ok = found;
        }
        if (ok) return true;
    }
    return false;
}

bool any_of_set(const Phrase& p, const std::set<Phrase>& s) { return s.count(p) > 0; }

} // namespace

Grade grade_answer(const std::string& reply, const GradeContext& ctx, const Rubric& rubric, const Lexicon& lexicon) {
    const Phrase words = phrase(reply);
    if (words.empty()) {
        return {Credit::None, "empty reply"};
    }
    const auto& truth = ctx.truth;

    if (ctx.form == QuestionForm::AssertRelation || ctx.form == QuestionForm::AssertAppellation) {
        for (const auto& w : words) {
            const bool yes = std::find(rubric.yes_words.begin(), rubric.yes_words.end(), w) != rubric.yes_words.end();
            const bool no = std::find(rubric.no_words.begin(), rubric.no_words.end(), w) != rubric.no_words.end();
            if (!yes && !no) continue;
            if (yes == truth.boolean_answer.value_or(false)) {
                return {Credit::Full, std::string("answered ") + (yes ? "yes" : "no") + " correctly"};
            }
            return {Credit::None, std::string("answered ") + (yes ? "yes" : "no") + ", expected " +
                                      (yes ? "no" : "yes")};
        }
        return {Credit::None, "no yes/no answer found"};
    }

    auto accepted = truth_terms(truth.designation_ab, ctx.asker);
    if (ctx.form == QuestionForm::Relationship) {
        const auto ba = truth_terms(truth.designation_ba, ctx.target);
        accepted.insert(ba.begin(), ba.end());
    }
    auto vocab = base_vocabulary(lexicon);
    vocab.insert(accepted.begin(), accepted.end());
    const auto found = mentions(words, vocab);

    const bool recited_ab = recites_chain(words, truth.chain);
    const bool recited_ba =
        ctx.form == QuestionForm::Relationship && recites_chain(words, reverse_chain(truth.chain));
    const bool chain_recited = recited_ab || recited_ba;
    // For chains without a family term the chain itself is the designation.
    const bool described = (recited_ab && truth.designation_ab.kind == DesignationKind::ChainDescription) ||
                           (recited_ba && truth.designation_ba.kind == DesignationKind::ChainDescription);
    const bool concluded = described || (!found.empty() && any_of_set(found.back(), accepted));

    if (!concluded) {
        if (chain_recited) {
            return {Credit::Half, "relation chain correct, final designation wrong"};
        }
        return {Credit::None, found.empty() ? "no match" : "concluded with a wrong designation"};
    }
    if (ctx.protocol == Protocol::Memory) {
        const Phrase target = phrase(ctx.target);
        const bool names_target = contains(words, target) || contains(words, phrase(ctx.target + "s"));
        bool names_other = false;
        for (const auto& n : ctx.other_names) {
            names_other = names_other || contains(words, phrase(n)) || contains(words, phrase(n + "s"));
        }
        if (names_other && !names_target) {
            return {Credit::Half, "relation correct, attributed to the wrong person"};
        }
        if (truth.chain.atoms.size() == 1 && truth.chain.atoms.front().ordinal) {
            const int want = *truth.chain.atoms.front().ordinal;
            for (const auto& w : words) {
                const int v = text::ordinal_value(w);
                if (v > 0 && v != want) {
                    return {Credit::Half, "relation correct, wrong ordinal"};
                }
            }
        }
    }
    return {Credit::Full, "concluded with the correct designation"};
}

std::map<std::string, GradeOverride> parse_overrides(std::string_view document) {
    std::map<std::string, GradeOverride> out;
    int line_no = 0;
    for (const auto& line : text::data_lines(document)) {
        ++line_no;
        const auto f = text::split(line, '|');
        const auto credit = f.size() >= 2 ? parse_credit(text::trim(f[1])) : std::nullopt;
        if (f.size() < 2 || f.size() > 3 || !credit || text::trim(f[0]).empty()) {
            throw MalformedTaskFile("override record " + std::to_string(line_no) + ": expected 'task_id|p|note'");
        }
        out[std::string(text::trim(f[0]))] = GradeOverride{*credit, f.size() == 3 ? text::unescape_field(f[2]) : ""};
    }
    return out;
}

} // namespace relgraph
