#pragma once

#include "relgraph/kinship.hpp"
#include "relgraph/relation_oracle.hpp"
#include "relgraph/scoring.hpp"

#include <map>
#include <string>
#include <vector>

namespace relgraph {

enum class Protocol : std::uint8_t { Reasoning, Memory };

inline constexpr std::string_view kRubricVersion = "rubric-1";

struct Rubric {
    std::string version{kRubricVersion};
    std::vector<std::string> yes_words{"yes", "correct", "right", "true"};
    std::vector<std::string> no_words{"no", "not", "incorrect", "wrong", "false"};
};

/// Everything the rubric needs to know about one question.
struct GradeContext {
    QuestionForm form = QuestionForm::Relationship;
    Protocol protocol = Protocol::Reasoning;
    GroundTruth truth;
    std::string asker;  // A
    std::string target; // B
    std::vector<std::string> other_names; // every other person in the graph
};

struct Grade {
    Credit credit = Credit::None;
    std::string rationale;

    friend bool operator==(const Grade&, const Grade&) = default;
};

/// Automatic grade of a free-text reply.
///
/// Forms 1 and 2: kin and role terms are located by longest match; the
/// last one mentioned is the reply's conclusion and earns full credit when
/// it names the truth (form 1 accepts either direction). A reply that
/// spells out the correct chain ("mother's father") but concludes wrongly
/// earns half. Under the memory protocol a correct conclusion about the
/// wrong person or with the wrong ordinal also earns half.
/// Forms 3 and 4: the first yes- or no-word decides.
Grade grade_answer(const std::string& reply, const GradeContext& context, const Rubric& rubric = Rubric{},
                   const Lexicon& lexicon = Lexicon::builtin());

struct GradeOverride {
    Credit credit = Credit::None;
    std::string note;

    friend bool operator==(const GradeOverride&, const GradeOverride&) = default;
};

/// `task_id|p|note` records; p is 0, 0.5 or 1. Throws MalformedTaskFile.
std::map<std::string, GradeOverride> parse_overrides(std::string_view document);

} // namespace relgraph
