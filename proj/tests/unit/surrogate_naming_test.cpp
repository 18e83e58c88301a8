#include "fixtures.hpp"

#include "relgraph/error.hpp"
#include "relgraph/graph_generator.hpp"
#include "relgraph/surrogate_naming.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace relgraph;

TEST(SurrogateNaming, ShippedLibrary) {
    const auto& lib = SurrogateLibrary::builtin();
    EXPECT_EQ(lib.count(Gender::Female), 64u);
    EXPECT_EQ(lib.count(Gender::Male), 64u);
    const auto women = lib.names(Gender::Female);
    EXPECT_NE(std::find(women.begin(), women.end(), "Xiaohong"), women.end());
    const auto men = lib.names(Gender::Male);
    EXPECT_NE(std::find(men.begin(), men.end(), "Xiaoming"), men.end());
}

TEST(SurrogateNaming, LoadValidation) {
    EXPECT_THROW(SurrogateLibrary::load("name|gender\nXiaohong|0\nXiaohong|0\n"), MalformedSurrogateFile);
    EXPECT_THROW(SurrogateLibrary::load("name|gender\nXiao hong|0\n"), MalformedSurrogateFile);
    EXPECT_THROW(SurrogateLibrary::load("name|gender\nXiaohong|2\n"), MalformedSurrogateFile);
    EXPECT_THROW(SurrogateLibrary::load("Xiaohong|0\n"), MalformedSurrogateFile);
}

TEST(SurrogateNaming, ForcedAssignment) {
    TaskGraph g(0);
    const auto f = g.add_node(Gender::Female);
    const auto m = g.add_node(Gender::Male);
    g.add_edge(f, m, "friend", std::nullopt);
    Rng rng(1);
    assign_names(g, SurrogateLibrary::load("name|gender\nXiaohong|0\nXiaoming|1\n"), rng);
    EXPECT_EQ(g.name_of(f), "Xiaohong");
    EXPECT_EQ(g.name_of(m), "Xiaoming");
}

TEST(SurrogateNaming, MissingPools) {
    auto g = testkit::star_graph(4);
    const auto men_only = SurrogateLibrary::load("name|gender\nA|1\nB|1\nC|1\nD|1\nE|1\n");
    Rng rng(1);
    EXPECT_THROW(assign_names(g, men_only, rng), EmptyGenderPool);

    TaskGraph five(0);
    const auto hub = five.add_node(Gender::Male);
    for (int i = 0; i < 5; ++i) five.add_edge(five.add_node(Gender::Female), hub, "friend", std::nullopt);
    const auto four_women = SurrogateLibrary::load("name|gender\nA|0\nB|0\nC|0\nD|0\nE|1\n");
    EXPECT_THROW(assign_names(five, four_women, rng), InsufficientSurrogates);
}

TEST(SurrogateNaming, InjectiveGenderRespectingDeterministic) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto a = generate_task_graph(SchemaRegistry::builtin(), 10, seed);
        auto b = a;
        Rng ra(seed), rb(seed);
        assign_names(a, SurrogateLibrary::builtin(), ra);
        assign_names(b, SurrogateLibrary::builtin(), rb);
        EXPECT_EQ(a, b);
        std::set<std::string> seen;
        const auto& lib = SurrogateLibrary::builtin();
        for (const auto& n : a.nodes()) {
            ASSERT_TRUE(n.name.has_value());
            EXPECT_TRUE(seen.insert(*n.name).second);
            const auto pool = lib.names(n.gender);
            EXPECT_NE(std::find(pool.begin(), pool.end(), *n.name), pool.end());
        }
    }
}

TEST(SurrogateNaming, FinalizeOrdinals) {
    TaskGraph g(0);
    const auto dad = g.add_node(Gender::Male);
    const auto s1 = g.add_node(Gender::Male);
    const auto s2 = g.add_node(Gender::Male);
    const auto pupil = g.add_node(Gender::Female);
    g.add_edge(s1, dad, "son", std::nullopt);
    g.add_edge(s2, dad, "son", std::nullopt);
    g.add_edge(dad, s1, "father", std::nullopt);
    g.add_edge(pupil, dad, "student", std::nullopt);
    Rng rng(8);
    finalize_ordinals(g, rng);
    const auto& e = g.edges();
    ASSERT_TRUE(e[0].ordinal && e[1].ordinal && e[3].ordinal);
    EXPECT_NE(*e[0].ordinal, *e[1].ordinal);
    for (const auto i : {0, 1, 3}) {
        EXPECT_GE(*e[i].ordinal, 1);
        EXPECT_LE(*e[i].ordinal, 4);
    }
    EXPECT_FALSE(e[2].ordinal.has_value());
    const auto before = *e[3].ordinal;
    finalize_ordinals(g, rng); // already set: untouched
    EXPECT_EQ(*g.edges()[3].ordinal, before);
}
