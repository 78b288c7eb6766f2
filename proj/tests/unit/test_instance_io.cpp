#include "conflict/instance_io.hpp"
#include "conflict/instances.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace conflict;

namespace {

InstanceBundle round_trip(const InstanceBundle & b)
{
    std::stringstream s;
    write_instance(s, b);
    return read_instance(s);
}

std::size_t error_line(const std::string & text)
{
    std::istringstream in(text);
    try {
        read_instance(in);
    }
    catch (const ParseError & e) {
        return e.line();
    }
    return 0;
}

const char * good = "conflict-instance\n"
                    "version 1\n"
                    "n_vertices 2\n"
                    "colour_universe_size 2\n"
                    "lists\n"
                    "0: 1 2\n"
                    "1: 1 2\n"
                    "constraints 1\n"
                    "0 1 1 2\n"
                    "meta 0\n"
                    "end\n";

} // namespace

TEST(InstanceIo, RoundTripGenerators)
{
    EXPECT_EQ(round_trip(gen_example1(3, 12)), gen_example1(3, 12));
    const auto up = blowup(reduce_k_colouring(oracle::cycle(5), 2));
    EXPECT_EQ(round_trip(up), up);
    const auto adapt = random_adaptable(gen_high_girth_regular(20, 3, 4), 6, 4, 4);
    EXPECT_EQ(round_trip(adapt), adapt);
}

TEST(InstanceIo, MetaEscapes)
{
    auto b = gen_example1(1, 1);
    b.meta["note"] = "tab\there\nnew line \\ backslash";
    b.meta["empty"] = "";
    EXPECT_EQ(round_trip(b), b);
}

TEST(InstanceIo, OrientationSurvives)
{
    InstanceBundle b;
    b.graph = MultiGraph(3);
    b.graph.add_constraint(2, 0, {3, 1});
    b.lists = ListAssignment::uniform(3, 3);
    b.colour_universe = 3;
    const auto back = round_trip(b);
    std::vector<Constraint> got(back.graph.constraints(2, 0).begin(), back.graph.constraints(2, 0).end());
    EXPECT_EQ(got, (std::vector<Constraint>{{3, 1}}));
}

TEST(InstanceIo, ParsesMinimal)
{
    std::istringstream in(good);
    const auto b = read_instance(in);
    EXPECT_EQ(b.graph.n_constraints(), 1u);
    EXPECT_EQ(b.lists[1], (std::vector<Colour>{1, 2}));
}

TEST(InstanceIo, ErrorsCarryLineNumbers)
{
    std::string text = good;
    EXPECT_EQ(error_line("nonsense\n"), 1u);
    EXPECT_EQ(error_line(std::string(good).replace(text.find("version 1"), 9, "version 7")), 2u);
    EXPECT_EQ(error_line(std::string(good).replace(text.find("1: 1 2"), 6, "1: 2 1")), 7u);
    EXPECT_EQ(error_line(std::string(good).replace(text.find("0 1 1 2"), 7, "0 0 1 2")), 9u);
    EXPECT_EQ(error_line(std::string(good).replace(text.find("0 1 1 2"), 7, "0 9 1 2")), 9u);
    EXPECT_EQ(error_line(std::string(good).replace(text.find("0 1 1 2"), 7, "0 1 x 2")), 9u);
    EXPECT_EQ(error_line(std::string(good).substr(0, text.find("end"))), 11u);
}

TEST(InstanceIo, RejectsWhitespaceInMetaKey)
{
    auto b = gen_example1(1, 1);
    b.meta["bad key"] = "x";
    std::ostringstream out;
    EXPECT_THROW(write_instance(out, b), ParameterError);
}
