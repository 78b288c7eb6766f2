#include "conflict/finisher.hpp"
#include "conflict/instances.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace conflict;

TEST(Example1, TwoColourGadget)
{
    const auto b = gen_example1(2, 4);
    std::vector<Constraint> got(b.graph.constraints(0, 1).begin(), b.graph.constraints(0, 1).end());
    EXPECT_EQ(got, (std::vector<Constraint>{{1, 1}, {1, 2}, {2, 1}, {2, 2}}));
    EXPECT_FALSE(brute_force(b).has_value());
}

TEST(Example1, SingleColour)
{
    const auto b = gen_example1(1, 1);
    EXPECT_EQ(b.graph.n_constraints(), 1u);
    EXPECT_EQ(b.lists[0], (std::vector<Colour>{1}));
    EXPECT_FALSE(brute_force(b).has_value());
}

TEST(Example1, ThreeColoursUncolourable) { EXPECT_FALSE(brute_force(gen_example1(3, 9)).has_value()); }

TEST(Example1, PaddingRaisesDegreeOnly)
{
    const auto b = gen_example1(2, 10);
    EXPECT_EQ(b.graph.max_degree(), 10u);
    EXPECT_EQ(conflict_degree(b.graph), 2u);
    EXPECT_TRUE(validate_girth(b.graph));
    EXPECT_FALSE(brute_force(b).has_value());
    EXPECT_THROW(gen_example1(3, 4), ParameterError);
}

TEST(Blowup, RecurrencesOnStar)
{
    // 3-star, one constraint per edge: ℓ = 2, Δ = 3, D = 1
    SimpleGraph star{4, {{0, 1}, {0, 2}, {0, 3}}};
    InstanceBundle b;
    b.graph = MultiGraph(4);
    for (auto [u, v] : star.edges)
        b.graph.add_constraint(u, v, {1, 1});
    b.lists = ListAssignment::uniform(4, 2);
    b.colour_universe = 2;
    ASSERT_EQ(b.graph.max_degree(), 3u);
    ASSERT_EQ(conflict_degree(b.graph), 1u);
    const auto up = blowup(b);
    EXPECT_EQ(up.lists.size_of(0), 4u);
    EXPECT_EQ(up.graph.max_degree(), 12u);
    EXPECT_EQ(conflict_degree(up.graph), 2u);
}

TEST(Blowup, GadgetDegreeMeasured)
{
    const auto up = blowup(gen_example1(2, 4));
    EXPECT_EQ(conflict_degree(up.graph), 4u);
    EXPECT_EQ(oracle::conflict_degree(up.graph), 4u);
}

TEST(Blowup, KeepsUncolourability)
{
    const auto base = reduce_k_colouring(oracle::cycle(5), 2);
    ASSERT_FALSE(brute_force(base).has_value());
    EXPECT_FALSE(brute_force(blowup(base)).has_value());
}

TEST(Blowup, RejectsUnequalLists)
{
    auto b = gen_example1(2, 4);
    b.lists.set(0, {1});
    EXPECT_THROW(blowup(b), ParameterError);
}

TEST(BlowupIterate, ZeroLevelsIsIdentity)
{
    const auto b = reduce_k_colouring(oracle::cycle(5), 2);
    auto [same, trace] = blowup_iterate(b, 0);
    EXPECT_EQ(same, b);
    ASSERT_EQ(trace.size(), 1u);
}

TEST(BlowupIterate, TwoLevelsFromTwoColours)
{
    const auto b = reduce_k_colouring(oracle::cycle(5), 2);
    auto [top, trace] = blowup_iterate(b, 2);
    ASSERT_EQ(trace.size(), 3u);
    EXPECT_EQ(trace[2].ell, 16u);
    EXPECT_EQ(trace[2].conflict_degree, 8u);
    EXPECT_EQ(trace[2].conflict_degree, oracle::conflict_degree(top.graph));
    EXPECT_NEAR(std::pow(16.0, 0.75), 8.0, 1e-12);
    EXPECT_EQ(blowup_trace_of(top), trace);
}

TEST(BlowupIterate, BudgetReportsPartialTrace)
{
    const auto b = reduce_k_colouring(oracle::cycle(5), 2);
    try {
        blowup_iterate(b, 4, 10'000);
        FAIL() << "expected a budget error";
    }
    catch (const BlowupBudgetError & e) {
        EXPECT_GE(e.partial_trace().size(), 1u);
    }
}

TEST(FAlpha, KnownValues)
{
    EXPECT_EQ(f_alpha(1.0), 0.5);
    EXPECT_EQ(f_alpha(2.0 * std::sqrt(2.0)), 15.0 / 16.0);
    EXPECT_EQ(f_alpha(2.0), 7.0 / 8.0);
    EXPECT_THROW(f_alpha(0.5), ParameterError);
}

TEST(KReduce, Oracles)
{
    EXPECT_FALSE(brute_force(reduce_k_colouring(oracle::cycle(3), 2)).has_value());
    EXPECT_FALSE(brute_force(reduce_k_colouring(SimpleGraph{2, {{0, 1}}}, 1)).has_value());
    EXPECT_TRUE(brute_force(reduce_k_colouring(oracle::cycle(5), 3)).has_value());
    for (std::size_t n = 5; n <= 8; ++n)
        for (std::size_t k = 2; k <= 3; ++k)
            EXPECT_EQ(brute_force(reduce_k_colouring(oracle::cycle(n), k)).has_value(),
                oracle::simple_k_colourable(oracle::cycle(n), k));
}

TEST(AdaptableLift, LabelsBecomeDiagonalConstraints)
{
    const auto b = adaptable_lift(2, {{0, 1, 5}}, ListAssignment::uniform(2, 5));
    std::vector<Constraint> got(b.graph.constraints(0, 1).begin(), b.graph.constraints(0, 1).end());
    EXPECT_EQ(got, (std::vector<Constraint>{{5, 5}}));
}

TEST(AdaptableLift, SimpleGraphHasDegreeOneConflicts)
{
    const auto b = random_adaptable(oracle::petersen(), 4, 3, 9);
    EXPECT_EQ(conflict_degree(b.graph), 1u);
}

TEST(AdaptableLift, ParallelSameLabel)
{
    const auto b = adaptable_lift(2, {{0, 1, 3}, {0, 1, 3}}, ListAssignment::uniform(2, 3));
    EXPECT_EQ(conflict_degree(b.graph), 2u);
    EXPECT_EQ(oracle::conflict_degree(b.graph), 2u);
}

TEST(Regular, TenVerticesDegreeThree)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto g = gen_high_girth_regular(10, 3, seed);
        const auto b = skeleton_bundle(g, 1);
        EXPECT_TRUE(validate_girth(b.graph));
        EXPECT_GE(oracle::girth(g), 5u);
        for (VertexId v = 0; v < 10; ++v)
            EXPECT_EQ(b.graph.degree(v), 3u);
    }
}

TEST(Regular, ImpossibleParameters)
{
    EXPECT_THROW(gen_high_girth_regular(4, 3, 1), GenerationError);
    EXPECT_THROW(gen_high_girth_regular(5, 3, 1), ParameterError);
}

TEST(Regular, FiftyVerticesDegreeFour)
{
    const auto g = gen_high_girth_regular(50, 4, 7);
    const auto b = skeleton_bundle(g, 1);
    EXPECT_TRUE(validate_girth(b.graph));
    for (VertexId v = 0; v < 50; ++v)
        EXPECT_EQ(b.graph.degree(v), 4u);
    EXPECT_EQ(g.edges, gen_high_girth_regular(50, 4, 7).edges);
}
