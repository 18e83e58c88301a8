#include "fixtures.hpp"

#include "relgraph/embedded_data.hpp"
#include "relgraph/error.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/surrogate_naming.hpp"
#include "relgraph/task_renderer.hpp"

#include <gtest/gtest.h>

using namespace relgraph;

namespace {

EdgeDescriptor descriptor(const std::string& h, const std::string& t, const std::string& r, std::optional<int> o) {
    return EdgeDescriptor{h, t, r, o};
}

} // namespace

TEST(TaskRenderer, ExampleSentences) {
    const auto& ts = TemplateSet::builtin();
    EXPECT_EQ(ts.render(descriptor("Xiaohong", "Xiaoming", "student", 3)), "Xiaohong is Xiaoming's third student.");
    EXPECT_EQ(ts.render(descriptor("Xiaohong", "Xiaoming", "teammate", std::nullopt)),
              "Xiaohong and Xiaoming are teammates.");
    EXPECT_EQ(ts.render(descriptor("Xiaoming", "Xiaohong", "father", std::nullopt)), "Xiaoming is Xiaohong's father.");
    const auto g = testkit::construction_example();
    EXPECT_EQ(render_edge_prompt(g.edges()[0], g), "Xiaohong is Xiaoming's third student.");
}

TEST(TaskRenderer, ParseExamples) {
    EXPECT_EQ(parse_prompt("Xiaohong is Xiaoming's third student."), descriptor("Xiaohong", "Xiaoming", "student", 3));
    EXPECT_EQ(parse_prompt("Xiaohong and Xiaoming are friends."),
              descriptor("Xiaohong", "Xiaoming", "friend", std::nullopt));
    EXPECT_THROW(parse_prompt("Xiaohong teleports."), UnparseablePrompt);
}

TEST(TaskRenderer, RoundTripEveryRelation) {
    Rng rng(17);
    const auto women = SurrogateLibrary::builtin().names(Gender::Female);
    const auto men = SurrogateLibrary::builtin().names(Gender::Male);
    for (const auto& e : SchemaRegistry::builtin().entries()) {
        for (int i = 0; i < 20; ++i) {
            const auto& h = rng.pick(std::span<const std::string>(rng.coin() ? women : men));
            std::string t;
            do {
                t = rng.pick(std::span<const std::string>(rng.coin() ? women : men));
            } while (t == h);
            const auto d = descriptor(h, t, e.relation, e.ordinal() ? std::optional<int>(rng.between(1, 4)) : std::nullopt);
            EXPECT_EQ(parse_prompt(TemplateSet::builtin().render(d)), d);
        }
    }
}

TEST(TaskRenderer, MissingNameRejected) {
    auto g = testkit::construction_example();
    g.node(NodeId{0}).name.reset();
    EXPECT_THROW(render_edge_prompt(g.edges()[0], g), MissingName);
}

TEST(TaskRenderer, TemplateValidation) {
    const auto& reg = SchemaRegistry::builtin();
    const std::string doc(data::kTemplates);
    EXPECT_NO_THROW(TemplateSet::load(doc, reg));
    EXPECT_THROW(TemplateSet::load("relation|pattern\n", reg), MalformedTemplateFile);
    auto no_ord = doc;
    no_ord.replace(no_ord.find("{ord} student"), 5, "");
    EXPECT_THROW(TemplateSet::load(no_ord, reg), MalformedTemplateFile);
    EXPECT_THROW(TemplateSet::load(doc + "enemy|{head} hates {tail}.\n", reg), Error);
    EXPECT_EQ(TemplateSet::builtin().identifier().size(), 12u);
    EXPECT_EQ(TemplateSet::load(doc, reg).identifier(), TemplateSet::builtin().identifier());
}

TEST(TaskRenderer, GraphPromptsInInsertionOrder) {
    const auto g = testkit::construction_example();
    const auto prompts = render_graph_prompts(g);
    ASSERT_EQ(prompts.size(), 3u);
    EXPECT_EQ(prompts[0], "Xiaohong is Xiaoming's third student.");
    EXPECT_EQ(prompts[1], "Xiaogang is Xiaohong's first son.");
    EXPECT_EQ(prompts[2], "Xiaoli is Xiaoming's first daughter.");
}

TEST(TaskRenderer, Rulebook) {
    const auto a = render_rulebook(SchemaRegistry::builtin(), Lexicon::builtin());
    const auto b = render_rulebook(SchemaRegistry::builtin(), Lexicon::builtin());
    EXPECT_EQ(a, b);
    EXPECT_NE(std::find(a.begin(), a.end(), "Your mother's father is your maternal grandfather."), a.end());
    // 27 definitions, then one line per second-order term, then the rules.
    const std::size_t rules = rulebook_rule_count();
    ASSERT_GT(a.size(), 27 + rules);
    for (std::size_t i = 0; i < 27; ++i) EXPECT_EQ(a[i].rfind("If ", 0), 0u) << a[i];
    for (std::size_t i = 27; i < a.size() - rules; ++i) {
        EXPECT_EQ(a[i].rfind("Your ", 0), 0u) << a[i];
        // No line restates a single relation ("Your son's older brother is your son.").
        EXPECT_EQ(a[i].find(" is your father."), std::string::npos) << a[i];
        EXPECT_EQ(a[i].find(" is your son."), std::string::npos) << a[i];
        EXPECT_EQ(a[i].find(" is your wife."), std::string::npos) << a[i];
    }
}

TEST(TaskRenderer, QuestionForms) {
    GroundTruth t;
    EXPECT_EQ(build_question(QuestionForm::Relationship, "Xiaoming", "Xiaohong", t),
              "What's the relationship between Xiaoming and Xiaohong?");
    EXPECT_EQ(build_question(QuestionForm::Appellation, "Xiaoming", "Xiaohong", t), "What should Xiaoming call Xiaohong?");
    t.probe_x = "mother";
    t.probe_y = "son";
    EXPECT_EQ(build_question(QuestionForm::AssertRelation, "Xiaoming", "Xiaohong", t),
              "Is there a mother-son relationship between Xiaoming and Xiaohong?");
    t.probe_x = "Grandma";
    EXPECT_EQ(build_question(QuestionForm::AssertAppellation, "Xiaoming", "Xiaohong", t),
              "Should Xiaoming call Grandma Xiaohong?");
}

TEST(TaskRenderer, Chunking) {
    auto numbered = [](int n) {
        std::vector<std::string> v;
        for (int i = 0; i < n; ++i) v.push_back(std::to_string(i));
        return v;
    };
    EXPECT_EQ(chunk_prompts(numbered(5), 1).size(), 1u);
    EXPECT_EQ(chunk_prompts(numbered(5), 5).size(), 5u);
    const auto seven = chunk_prompts(numbered(7), 3);
    ASSERT_EQ(seven.size(), 3u);
    EXPECT_EQ(seven[0].size(), 3u);
    EXPECT_EQ(seven[1].size(), 2u);
    EXPECT_EQ(seven[2].size(), 2u);
    EXPECT_THROW(chunk_prompts(numbered(3), 4), TooFewPrompts);
    EXPECT_THROW(chunk_prompts(numbered(3), 0), TooFewPrompts);
    for (int n = 1; n <= 12; ++n) {
        for (int k = 1; k <= std::min(n, 5); ++k) {
            std::vector<std::string> joined;
            std::size_t lo = 100, hi = 0;
            for (const auto& c : chunk_prompts(numbered(n), k)) {
                joined.insert(joined.end(), c.begin(), c.end());
                lo = std::min(lo, c.size());
                hi = std::max(hi, c.size());
            }
            EXPECT_EQ(joined, numbered(n));
            EXPECT_LE(hi - lo, 1u);
        }
    }
}

TEST(TaskRenderer, QuestionsMentionBothNames) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto g = generate_task_graph(SchemaRegistry::builtin(), 8, seed);
        Rng rng(seed);
        assign_names(g, SurrogateLibrary::builtin(), rng);
        for (const auto& [d, pair] : [&] {
                 std::vector<std::pair<int, std::pair<NodeId, NodeId>>> out;
                 for (int d = 1; d <= 3; ++d) {
                     for (const auto& p : pairs_at_distance(g, d)) out.push_back({d, p});
                 }
                 return out;
             }()) {
            for (int f = 1; f <= 3; ++f) {
                const auto form = static_cast<QuestionForm>(f);
                const auto t = ground_truth_for(g, pair.first, pair.second, form, rng);
                const auto q = build_question(form, g.name_of(pair.first), g.name_of(pair.second), t);
                EXPECT_NE(q.find(g.name_of(pair.first)), std::string::npos) << q;
                EXPECT_NE(q.find(g.name_of(pair.second)), std::string::npos) << q;
            }
        }
    }
}
