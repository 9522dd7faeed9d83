#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "gdag/classify.hpp"
#include "gdag/dsep.hpp"
#include "gdag/entropy_cone.hpp"
#include "gdag/io.hpp"
#include "gdag/known_graphs.hpp"
#include "lab.hpp"

#include <json.hpp>

using namespace gdag;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_lab(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = gdag::lab::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string graph(const std::string& name)
{
    return std::string(GDAG_DATA_DIR) + "/graphs/" + name + ".json";
}

std::string dist(const std::string& name)
{
    return std::string(GDAG_DATA_DIR) + "/distributions/" + name + ".json";
}

bool one_line(const std::string& s)
{
    return !s.empty() && s.find('\n') == s.size() - 1;
}

} // namespace

TEST(Cli, Dsep)
{
    auto r = run_lab({"dsep", graph("bell"), "--x", "A", "--y", "Y", "--z", "X"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "true\n");

    r = run_lab({"dsep", graph("collider"), "--x", "X", "--y", "Y", "--z", "Z"});
    EXPECT_EQ(r.out, "false\n");

    r = run_lab({"dsep", graph("separation_example"), "--x", "A,D", "--y", "F", "--witness"});
    EXPECT_EQ(r.out, "true\n" R"({"u":["A","D","E","H"],"v":["F","J"],"z":[],"w":["B","C"]})" "\n");

    r = run_lab({"dsep", graph("bell"), "--x", "A", "--y", "A", "--z", "X"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(one_line(r.err));

    r = run_lab({"dsep", graph("bell"), "--x", "A", "--y", "Q"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(one_line(r.err));
}

TEST(Cli, CiSetRoundTrips)
{
    const auto r = run_lab({"ci-set", graph("bell")});
    ASSERT_EQ(r.code, 0);
    const GDag g = graphs::bell();
    EXPECT_EQ(parse_ci_set(g, r.out), observable_ci_set(g));
}

TEST(Cli, CheckDist)
{
    auto r = run_lab({"check-dist", graph("triangle"), dist("triangle_correlated")});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["holds"].get<bool>());
    ASSERT_EQ(j["triangle"].size(), 3u);
    EXPECT_NEAR(j["triangle"][0]["monogamy_margin"].get<double>(), 1.0, 1e-12);
    EXPECT_FALSE(j["triangle"][0]["gpt_feasible"].get<bool>());

    r = run_lab({"check-dist", graph("triangle"), dist("triangle_uniform")});
    EXPECT_EQ(r.code, 0);

    r = run_lab({"check-dist", graph("instrumental"), dist("instrumental_joint")});
    EXPECT_EQ(r.code, 0);
    j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["instrumental"]["instrumental_value"], "1");

    r = run_lab({"check-dist", graph("bell"), dist("triangle_uniform")});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, Ineq)
{
    auto r = run_lab({"ineq", "instrumental", dist("instrumental_deterministic")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, R"({"instrumental_value":"2"})" "\n");
    r = run_lab({"ineq", "instrumental", dist("instrumental_copy")});
    EXPECT_EQ(r.code, 0);
    r = run_lab({"ineq", "triangle", dist("triangle_correlated")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, R"({"monogamy_margin":1.0,"gpt_feasible":false})" "\n");
    r = run_lab({"ineq", "square", dist("triangle_correlated")});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, ClassifyAndReduce)
{
    auto r = run_lab({"classify", graph("one_sided_bell")});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(verify_certificate(parse_certificate(r.out)));
    r = run_lab({"classify", graph("instrumental")});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.out, "unknown\n");
    r = run_lab({"reduce", graph("bell")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(parse_gdag(r.out), graphs::bell());
}

TEST(Cli, Census)
{
    auto r = run_lab({"census", "--n", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "4,420,419,1\n");
    r = run_lab({"census", "--n", "3", "--header"});
    EXPECT_EQ(r.out, "n,total,condition_holds,survivors\n3,40,40,0\n");
    r = run_lab({"census", "--n", "6"});
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(one_line(r.err));
    r = run_lab({"census", "--n", "9", "--long-run"});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, Entropic)
{
    const auto r = run_lab({"entropic", graph("bell"), "--compare"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const Cone ec = parse_cone(j["E_C"].dump());
    const Cone ei = parse_cone(j["E_I"].dump());
    EXPECT_EQ(ec, derive_classical_cone(graphs::bell()));
    EXPECT_EQ(ei, derive_independence_cone(graphs::bell()));
    EXPECT_TRUE(j["non_implied"].empty());
}

TEST(Cli, DeterministicOutputIsStable)
{
    const auto a = run_lab({"--deterministic", "census", "--n", "4", "--list-survivors"});
    const auto b = run_lab({"--deterministic", "census", "--n", "4", "--list-survivors"});
    EXPECT_EQ(a.out, b.out);
    const auto c = run_lab({"--deterministic", "entropic", graph("bell")});
    const auto d = run_lab({"--deterministic", "entropic", graph("bell")});
    EXPECT_EQ(c.out, d.out);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_lab({}).code, 2);
    EXPECT_EQ(run_lab({"frobnicate"}).code, 2);
    EXPECT_EQ(run_lab({"classify", "/nonexistent.json"}).code, 2);
    EXPECT_EQ(run_lab({"--jobs", "0", "census", "--n", "2"}).code, 2);
    EXPECT_EQ(run_lab({"--help"}).code, 0);

    ::setenv("GDAG_LAB_JOBS", "zero", 1);
    EXPECT_EQ(run_lab({"census", "--n", "2"}).code, 2);
    ::setenv("GDAG_LAB_JOBS", "3", 1);
    EXPECT_EQ(run_lab({"--jobs", "1", "census", "--n", "2"}).code, 0);
    ::unsetenv("GDAG_LAB_JOBS");
}
