#include "conflict/finisher.hpp"
#include "conflict/procedure.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace conflict;

namespace {

InstanceBundle small_random(std::size_t n, std::size_t colours, std::size_t m, std::uint64_t seed)
{
    Rng rng(seed);
    InstanceBundle b;
    b.graph = MultiGraph(n);
    while (b.graph.n_constraints() < m) {
        const auto u = static_cast<VertexId>(rng.uniform_below(n));
        const auto v = static_cast<VertexId>(rng.uniform_below(n));
        if (u != v)
            b.graph.add_constraint(u, v,
                {static_cast<Colour>(rng.uniform_below(colours) + 1),
                    static_cast<Colour>(rng.uniform_below(colours) + 1)});
    }
    b.lists = ListAssignment::uniform(n, colours);
    b.colour_universe = colours;
    return b;
}

} // namespace

TEST(Reed, EdgelessSatisfied)
{
    const auto r = check_reed(MultiGraph(4), ListAssignment::uniform(4, 2), 2);
    EXPECT_EQ(r.worst_t, 0u);
    EXPECT_TRUE(r.satisfied);
    EXPECT_DOUBLE_EQ(4 * r.lll_p * r.lll_d, 1.0);
}

TEST(Reed, GadgetNotSatisfied)
{
    const auto b = gen_example1(2, 4);
    const auto r = check_reed(b.graph, b.lists, 2);
    EXPECT_EQ(r.worst_t, 2u);
    EXPECT_FALSE(r.satisfied);
}

TEST(Reed, ShortListIsPrecondition)
{
    const auto b = gen_example1(2, 4);
    EXPECT_THROW(check_reed(b.graph, b.lists, 3), PreconditionError);
}

TEST(Reed, AgreesWithRecomputedT)
{
    const auto g = gen_high_girth_regular(40, 3, 5);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto b = random_adaptable(g, 16, 16, seed);
        const auto r = check_reed(b.graph, b.lists, 16);
        std::size_t worst = 0;
        const std::vector<bool> all(40, true);
        for (VertexId v = 0; v < 40; ++v)
            for (auto c : b.lists[v])
                worst = std::max(worst, oracle::t_direct(b.graph, b.lists, all, v, c));
        EXPECT_EQ(r.worst_t, worst);
        EXPECT_EQ(r.satisfied, worst <= 2);
    }
}

TEST(Resample, NoConstraintsNoResamples)
{
    const auto b = skeleton_bundle(oracle::cycle(5), 8);
    const auto r = resample_colouring(b.graph, b.lists, Colouring(5), 8, 1);
    ASSERT_TRUE(r.colouring.has_value());
    EXPECT_EQ(r.resamples, 0u);
}

TEST(Resample, FiveCycleManySeeds)
{
    std::vector<LabelledEdge> e{{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {3, 4, 4}, {4, 0, 5}};
    const auto b = adaptable_lift(5, e, ListAssignment::uniform(5, 9));
    ASSERT_TRUE(brute_force(b).has_value());
    std::size_t worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = resample_colouring(b.graph, b.lists, Colouring(5), 9, seed);
        ASSERT_TRUE(r.colouring.has_value());
        EXPECT_TRUE(verify_colouring(b.graph, *r.colouring));
        EXPECT_TRUE(respects_lists(b.lists, *r.colouring));
        worst = std::max(worst, r.resamples);
    }
    EXPECT_LE(worst, 100u);
}

TEST(Resample, RefusesWithoutCondition)
{
    const auto b = gen_example1(2, 4);
    EXPECT_THROW(resample_colouring(b.graph, b.lists, Colouring(2), 2, 1), PreconditionError);
    FinisherOptions o;
    o.override_condition = true;
    o.max_resamples = 500;
    const auto r = resample_colouring(b.graph, b.lists, Colouring(2), 2, 1, o);
    EXPECT_FALSE(r.colouring.has_value());
    EXPECT_EQ(r.resamples, 500u);
}

TEST(Resample, KeepsFixedVertices)
{
    MultiGraph g(3);
    g.add_constraint(0, 1, {1, 1});
    g.add_constraint(1, 2, {2, 2});
    const auto lists = ListAssignment::uniform(3, 16);
    Colouring partial(3);
    partial.assign(0, 1);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        FinisherOptions o;
        o.override_condition = true;
        const auto r = resample_colouring(g, lists, partial, 16, seed, o);
        ASSERT_TRUE(r.colouring.has_value());
        EXPECT_EQ((*r.colouring)[0], Colour{1});
        EXPECT_NE((*r.colouring)[1], Colour{1});
    }
}

TEST(Resample, AgreesWithOracle)
{
    std::size_t absent = 0, present = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const auto b = small_random(5, 2 + seed % 2, 6 + (seed % 4) * 8, seed);
        const auto truth = brute_force(b);
        FinisherOptions o;
        o.override_condition = true;
        o.max_resamples = 20'000;
        const auto r = resample_colouring(b.graph, b.lists, Colouring(5), b.lists.size_of(0), seed, o);
        if (!truth) {
            ++absent;
            EXPECT_FALSE(r.colouring.has_value());
        }
        else {
            ++present;
            if (r.colouring) {
                EXPECT_TRUE(verify_colouring(b.graph, *r.colouring));
            }
        }
    }
    EXPECT_GT(absent, 0u);
    EXPECT_GT(present, 0u);
}

TEST(Resample, AccountingOnTruncatedLists)
{
    const auto g = gen_high_girth_regular(40, 3, 8);
    const auto b = random_adaptable(g, 16, 16, 3);
    const auto r = resample_colouring(b.graph, b.lists, Colouring(40), 16, 3);
    ASSERT_TRUE(r.colouring.has_value());
    EXPECT_TRUE(r.truncated_condition.satisfied);
    EXPECT_LE(static_cast<double>(r.truncated_condition.measured_d), r.truncated_condition.lll_d);
    EXPECT_TRUE(r.truncated_condition.accounting_holds());
}

TEST(BruteForce, Basics)
{
    EXPECT_FALSE(brute_force(gen_example1(2, 4)).has_value());
    InstanceBundle one;
    one.graph = MultiGraph(1);
    one.lists = ListAssignment::uniform(1, 1);
    const auto c = brute_force(one);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ((*c)[0], Colour{1});

    const auto tri = reduce_k_colouring(oracle::cycle(3), 3);
    const auto t = brute_force(tri);
    ASSERT_TRUE(t.has_value());
    EXPECT_EQ((*t)[0], Colour{1});
    EXPECT_EQ((*t)[1], Colour{2});
    EXPECT_EQ((*t)[2], Colour{3});
    EXPECT_EQ(oracle::simple_k_colourable(oracle::cycle(3), 3), true);
}

TEST(BruteForce, BudgetIsNotAVerdict)
{
    const auto b = skeleton_bundle(oracle::petersen(), 10);
    EXPECT_THROW(brute_force(b, 1e6), ResourceError);
}

TEST(BruteForce, OddCycleTwoColours)
{
    const auto b = reduce_k_colouring(oracle::cycle(5), 2);
    EXPECT_FALSE(brute_force(b).has_value());
    EXPECT_FALSE(oracle::bipartite(oracle::cycle(5)));
}

TEST(Pipeline, TwoHundredVerticesColoured)
{
    const auto g = gen_high_girth_regular(200, 4, 21);
    const auto b = std::make_shared<const InstanceBundle>(random_adaptable(g, 12, 12, 21));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto run = run_procedure(b, compute_params(4, 1), seed);
        ASSERT_EQ(run.outcome, Outcome::ready_for_finisher);
        const auto & s = run.state;
        std::size_t ell = SIZE_MAX;
        for (VertexId v = 0; v < 200; ++v)
            if (!s.colouring.coloured(v))
                ell = std::min(ell, s.lists.size_of(v));
        const auto cond = check_reed(s.graph(), s.lists, s.colouring, ell);
        ASSERT_TRUE(cond.satisfied);
        const auto fin = resample_colouring(s.graph(), s.lists, s.colouring, ell, seed);
        ASSERT_TRUE(fin.colouring.has_value());
        EXPECT_TRUE(verify_colouring(b->graph, *fin.colouring));
        EXPECT_TRUE(respects_lists(b->lists, *fin.colouring));
    }
}
