#include "relgraph/task_renderer.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/text.hpp"

#include <algorithm>
#include <set>

namespace relgraph {

namespace {

constexpr std::string_view kSlots[] = {"{head}", "{tail}", "{ord}"};

std::size_t occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t count = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) {
        ++count;
    }
    return count;
}

std::string regex_escape(std::string_view s) {
    static const std::string special = R"(\^$.|?*+()[]{})";
    std::string out;
    for (const char c : s) {
        if (special.find(c) != std::string::npos) out += '\\';
        out += c;
    }
    return out;
}

const std::vector<std::string> kDerivationRules = {
    "Your parent's parent is your grandparent, and your grandparent's parent is your great-grandparent.",
    "Relatives reached through your father are on the paternal side, relatives reached through your mother are "
    "on the maternal side.",
    "Your parent's sibling is your uncle or aunt, and that person's child is your cousin.",
    "Your sibling's child is your nephew or niece, and your child's child is your grandchild.",
    "Your father's wife is your mother, your mother's husband is your father, and your spouse's child is your "
    "own child.",
    "Your spouse's parent is your parent-in-law, and your child's spouse is your son-in-law or daughter-in-law.",
    "Your spouse's sibling and your sibling's spouse are your brother-in-law or sister-in-law.",
    "Two children of the same parents are siblings; the one born first is the older one.",
    "Teachers, students, leaders, subordinates, colleagues, teammates, friends, partners, sworn siblings and "
    "godparents do not combine into family terms; describe such a relation as a chain, such as the wife of your "
    "teacher.",
    "An ordinal such as third in third student only counts people of that kind and does not change the "
    "relationship.",
};

std::string either(const std::string& female, const std::string& male) {
    return female == male ? female : male + " or " + female;
}

} // namespace

TemplateSet TemplateSet::load(std::string_view document, const SchemaRegistry& registry) {
    const auto lines = text::data_lines(document);
    if (lines.empty() || text::trim(lines.front()) != "relation|pattern") {
        throw MalformedTemplateFile("template file must start with the header 'relation|pattern'");
    }
    TemplateSet set;
    std::set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto bar = lines[i].find('|');
        const auto where = "template line " + std::to_string(i + 1);
        if (bar == std::string::npos) {
            throw MalformedTemplateFile(where + ": expected 'relation|pattern'");
        }
        PromptTemplate t{lines[i].substr(0, bar), lines[i].substr(bar + 1)};
        const auto* schema = registry.find(t.relation);
        if (schema == nullptr) {
            throw MalformedTemplateFile(where + ": unknown relation " + t.relation);
        }
        if (!seen.insert(t.relation).second) {
            throw MalformedTemplateFile(where + ": second template for " + t.relation);
        }
        if (occurrences(t.pattern, "{head}") != 1 || occurrences(t.pattern, "{tail}") != 1) {
            throw MalformedTemplateFile(where + ": {head} and {tail} must appear exactly once");
        }
        if (occurrences(t.pattern, "{ord}") != (schema->ordinal() ? 1U : 0U)) {
            throw MalformedTemplateFile(where + ": {ord} must appear exactly when the relation is ordinal");
        }

        Matcher m;
        std::string re;
        std::size_t pos = 0;
        while (pos < t.pattern.size()) {
            std::size_t next = std::string::npos;
            std::string_view slot;
            for (const auto s : kSlots) {
                const auto p = t.pattern.find(s, pos);
                if (p < next) {
                    next = p;
                    slot = s;
                }
            }
            re += regex_escape(std::string_view(t.pattern).substr(pos, next - pos));
            if (next == std::string::npos) break;
            re += slot == "{ord}" ? "([a-z]+)" : "([A-Za-z]+)";
            m.slots.push_back(slot[1]);
            pos = next + slot.size();
        }
        m.re = std::regex(re);
        set.matchers_.push_back(std::move(m));
        set.templates_.push_back(std::move(t));
    }
    for (const auto& e : registry.entries()) {
        if (seen.count(e.relation) == 0) {
            throw MalformedTemplateFile("no template for relation " + e.relation);
        }
    }
    set.identifier_ = text::sha256_hex(document).substr(0, 12);
    return set;
}

const TemplateSet& TemplateSet::builtin() {
    static const TemplateSet set = load(data::kTemplates, SchemaRegistry::builtin());
    return set;
}

const PromptTemplate& TemplateSet::find(std::string_view relation) const {
    for (const auto& t : templates_) {
        if (t.relation == relation) return t;
    }
    throw UnknownRelationType("no template for relation " + std::string(relation));
}

std::string TemplateSet::render(const EdgeDescriptor& edge) const {
    std::string out = find(edge.relation).pattern;
    auto fill = [&out](std::string_view slot, const std::string& value) {
        const auto p = out.find(slot);
        if (p != std::string::npos) out.replace(p, slot.size(), value);
    };
    fill("{head}", edge.head_name);
    fill("{tail}", edge.tail_name);
    if (out.find("{ord}") != std::string::npos) {
        const auto word = edge.ordinal ? text::ordinal_word(*edge.ordinal) : std::string();
        if (word.empty()) {
            throw UnparseablePrompt("relation " + edge.relation + " needs an ordinal between 1 and 10");
        }
        fill("{ord}", word);
    }
    return out;
}

EdgeDescriptor TemplateSet::parse(std::string_view sentence) const {
    const std::string s(text::trim(sentence));
    std::optional<EdgeDescriptor> found;
    for (std::size_t i = 0; i < templates_.size(); ++i) {
        std::smatch match;
        if (!std::regex_match(s, match, matchers_[i].re)) continue;
        EdgeDescriptor d;
        d.relation = templates_[i].relation;
        bool ok = true;
        for (std::size_t k = 0; k < matchers_[i].slots.size(); ++k) {
            const std::string value = match[static_cast<int>(k) + 1];
            switch (matchers_[i].slots[k]) {
            case 'h': d.head_name = value; break;
            case 't': d.tail_name = value; break;
            default: {
                const int v = text::ordinal_value(value);
                ok = v > 0;
                d.ordinal = v;
            }
            }
        }
        if (!ok) continue;
        if (found) {
            throw UnparseablePrompt("sentence matches more than one template: " + s);
        }
        found = d;
    }
    if (!found) {
        throw UnparseablePrompt("no template matches: " + s);
    }
    return *found;
}

std::string render_edge_prompt(const Edge& edge, const TaskGraph& graph, const TemplateSet& templates) {
    return templates.render(
        EdgeDescriptor{graph.name_of(edge.head), graph.name_of(edge.tail), edge.relation, edge.ordinal});
}

EdgeDescriptor parse_prompt(std::string_view sentence, const TemplateSet& templates) {
    return templates.parse(sentence);
}

std::vector<std::string> render_graph_prompts(const TaskGraph& graph, const TemplateSet& templates) {
    std::vector<std::string> out;
    for (const auto& e : graph.edges()) {
        out.push_back(render_edge_prompt(e, graph, templates));
    }
    return out;
}

std::vector<std::string> render_rulebook(const SchemaRegistry& registry, const Lexicon& lexicon) {
    std::vector<std::string> out;
    for (const auto& e : registry.entries()) {
        const auto name = display_name(e.relation);
        if (e.symmetric()) {
            out.push_back("If A and B are " + name + "s, then B and A are " + name + "s as well.");
            continue;
        }
        const RelationAtom inverse{e.relation, Orientation::Inverse, std::nullopt};
        out.push_back("If A is B's " + name + ", then B is A's " +
                      either(role_name(inverse, Gender::Female), role_name(inverse, Gender::Male)) + ".");
    }

    // First two-step family chain reaching each lexicon entry.
    const auto& kin = kin_relations();
    std::set<std::string> direct;
    for (const auto& r : kin) {
        for (const Gender start : {Gender::Male, Gender::Female}) {
            const auto outcome = chain_kin_outcome({{r, Orientation::Forward, std::nullopt}},
                                                   {start, *intrinsic_head_gender(r)});
            if (outcome && outcome->coordinate) direct.insert(outcome->coordinate->key());
        }
    }
    for (const auto& entry : lexicon.entries()) {
        if (direct.count(entry.key) != 0) continue;
        std::optional<std::string> phrase;
        for (std::size_t i = 0; i < kin.size() && !phrase; ++i) {
            for (std::size_t j = 0; j < kin.size() && !phrase; ++j) {
                for (const Gender start : {Gender::Male, Gender::Female}) {
                    const std::vector<RelationAtom> atoms = {{kin[i], Orientation::Forward, std::nullopt},
                                                             {kin[j], Orientation::Forward, std::nullopt}};
                    const std::vector<Gender> genders = {start, *intrinsic_head_gender(kin[i]),
                                                         *intrinsic_head_gender(kin[j])};
                    const auto outcome = chain_kin_outcome(atoms, genders);
                    if (outcome && outcome->coordinate && outcome->coordinate->key() == entry.key) {
                        phrase = display_name(kin[i]) + "'s " + display_name(kin[j]);
                        break;
                    }
                }
            }
        }
        if (phrase) {
            out.push_back("Your " + *phrase + " is your " + entry.canonical + ".");
        }
    }
    out.insert(out.end(), kDerivationRules.begin(), kDerivationRules.end());
    return out;
}

std::size_t rulebook_rule_count() { return kDerivationRules.size(); }

std::string build_question(QuestionForm form, const std::string& a, const std::string& b, const GroundTruth& truth) {
    switch (form) {
    case QuestionForm::Relationship: return "What's the relationship between " + a + " and " + b + "?";
    case QuestionForm::Appellation: return "What should " + a + " call " + b + "?";
    case QuestionForm::AssertRelation:
        return "Is there a " + truth.probe_x + "-" + truth.probe_y + " relationship between " + a + " and " + b + "?";
    case QuestionForm::AssertAppellation: return "Should " + a + " call " + truth.probe_x + " " + b + "?";
    }
    return {};
}

std::vector<std::vector<std::string>> chunk_prompts(const std::vector<std::string>& prompts, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > prompts.size()) {
        throw TooFewPrompts("cannot split " + std::to_string(prompts.size()) + " prompts into " + std::to_string(k) +
                            " steps");
    }
    const std::size_t n = prompts.size();
    const std::size_t groups = static_cast<std::size_t>(k);
    std::vector<std::vector<std::string>> out;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t size = n / groups + (g < n % groups ? 1 : 0);
        out.emplace_back(prompts.begin() + static_cast<std::ptrdiff_t>(pos),
                         prompts.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return out;
}

} // namespace relgraph
