#pragma once

#include "relgraph/kinship.hpp"
#include "relgraph/relation_oracle.hpp"
#include "relgraph/schema_registry.hpp"
#include "relgraph/task_graph.hpp"

#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace relgraph {

/// Names and relation carried by one rendered edge sentence.
struct EdgeDescriptor {
    std::string head_name;
    std::string tail_name;
    RelationType relation;
    std::optional<int> ordinal;

    friend bool operator==(const EdgeDescriptor&, const EdgeDescriptor&) = default;
};

struct PromptTemplate {
    RelationType relation;
    std::string pattern; // slots {head}, {tail}, {ord}
};

/// One sentence pattern per relation of a schema registry.
class TemplateSet {
public:
    /// `relation|pattern` records after a header. Every registry relation
    /// needs exactly one pattern containing {head} and {tail} once each,
    /// and {ord} exactly when the relation is ordinal.
    static TemplateSet load(std::string_view document, const SchemaRegistry& registry);
    static const TemplateSet& builtin();

    const PromptTemplate& find(std::string_view relation) const;
    const std::vector<PromptTemplate>& templates() const { return templates_; }

    std::string render(const EdgeDescriptor& edge) const;
    /// Throws UnparseablePrompt unless exactly one pattern matches.
    EdgeDescriptor parse(std::string_view sentence) const;

    /// Short content hash of the source document.
    const std::string& identifier() const { return identifier_; }

private:
    struct Matcher {
        std::regex re;
        std::vector<char> slots; // 'h', 't', 'o' in capture order
    };

    std::vector<PromptTemplate> templates_;
    std::vector<Matcher> matchers_;
    std::string identifier_;
};

std::string render_edge_prompt(const Edge& edge, const TaskGraph& graph,
                               const TemplateSet& templates = TemplateSet::builtin());
EdgeDescriptor parse_prompt(std::string_view sentence, const TemplateSet& templates = TemplateSet::builtin());

/// Edge sentences in insertion order.
std::vector<std::string> render_graph_prompts(const TaskGraph& graph,
                                              const TemplateSet& templates = TemplateSet::builtin());

/// Definitions of every basic relation, then one sentence per kin term
/// reachable by a two-step family chain, then general derivation rules.
std::vector<std::string> render_rulebook(const SchemaRegistry& registry, const Lexicon& lexicon);
std::size_t rulebook_rule_count();

std::string build_question(QuestionForm form, const std::string& a, const std::string& b, const GroundTruth& truth);

/// Contiguous split into k groups whose sizes differ by at most one,
/// larger groups first. Throws TooFewPrompts unless 1 <= k <= size.
std::vector<std::vector<std::string>> chunk_prompts(const std::vector<std::string>& prompts, int k);

} // namespace relgraph
