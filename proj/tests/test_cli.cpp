#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <geominima/geominima.hpp>

using namespace geominima;
namespace fs = std::filesystem;

namespace
{
struct Run
{
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr discarded; returns its exit status and stdout.
Run cli(std::string const& args)
{
    std::string const cmd = std::string("\"") + GEOMINIMA_CLI + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, got);
    int const status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string sample(char const* name)
{
    return std::string(GEOMINIMA_SAMPLES) + "/" + name;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test
{
  protected:
    void SetUp() override
    {
        auto const* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("geominima_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(char const* name) const { return (dir_ / name).string(); }
    std::string write(char const* name, std::string const& text) const
    {
        std::ofstream(dir_ / name) << text;
        return path(name);
    }

    fs::path dir_;
};
}  // namespace

TEST_F(CliTest, ComputeOnSquare)
{
    auto const r = cli("compute --body " + sample("square.json")
                       + " --quantities volume,mahler,mixed_volume --p 1,-1");
    ASSERT_EQ(r.code, 0);
    auto const j = Json::parse(r.out);
    auto const& res = j.at("results");
    EXPECT_DOUBLE_EQ(res.at("volume").at("value").get<double>(), 4);
    EXPECT_DOUBLE_EQ(res.at("mahler").at("value").get<double>(), 8);
    EXPECT_EQ(res.at("volume").at("method"), "exact");
    // V_p(square, B) = (1/2) sum h_B^p h_K^{1-p} S = (1/2) * 4 * 2 = 4 for any p.
    for (auto const& e : res.at("mixed_volume"))
        EXPECT_NEAR(e.at("value").get<double>(), 4, 1e-12);
}

TEST_F(CliTest, PlainOutputUsesNineDigits)
{
    auto const r = cli("compute --body " + sample("ball.json")
                       + " --quantities volume,p_surface_area --p 3 --format plain");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("volume: 3.14159265\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("p_surface_area[3]: 6.28318531\n"), std::string::npos) << r.out;
    auto const csv = cli("compute --body " + sample("ball.json") + " --format csv");
    ASSERT_EQ(csv.code, 0);
    EXPECT_NE(csv.out.find("volume,,3.1415926535897931\n"), std::string::npos) << csv.out;
}

TEST_F(CliTest, EstimateReportsDirection)
{
    auto const r = cli("estimate --body " + sample("ellipse.json") + " --p 1 --restarts 3");
    ASSERT_EQ(r.code, 0);
    auto const j = Json::parse(r.out);
    EXPECT_EQ(j.at("direction"), "upper");
    EXPECT_NEAR(j.at("value").get<double>(), 2 * std::numbers::pi * std::cbrt(2.0), 1e-5 * 8);
    for (char const* key : {"p", "value", "witness", "objective_at_K", "objective_at_B",
                            "restarts_used"})
        EXPECT_TRUE(j.contains(key)) << key;
    auto const sq = cli("estimate --body " + sample("square.json") + " --p 0 --format plain");
    ASSERT_EQ(sq.code, 0);
    EXPECT_EQ(sq.out.rfind("p = 0: 8 (exact bound, ok)\n", 0), 0u) << sq.out;
}

TEST_F(CliTest, MinusNIsAUsageError)
{
    EXPECT_EQ(cli("estimate --body " + sample("square.json") + " --p -2").code, 2);
    EXPECT_EQ(cli("compute --body " + sample("cube.json") + " --quantities mixed_volume --p -3")
                  .code,
              2);
    // -2 is admissible in three dimensions.
    EXPECT_EQ(cli("compute --body " + sample("cube.json") + " --quantities mixed_volume --p -2")
                  .code,
              0);
}

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("compute").code, 2);
    EXPECT_EQ(cli("compute --body /no/such/file.json").code, 2);
    EXPECT_EQ(cli("estimate --body " + sample("square.json") + " --p 1 --format xml").code, 2);
    auto const bad = write("bad.json", R"({"dim": 2, "repr": {"type": "blob"}})");
    EXPECT_EQ(cli("compute --body " + bad).code, 2);
    auto const garbled = write("garbled.json", "{ not json");
    EXPECT_EQ(cli("compute --body " + garbled).code, 2);
    EXPECT_EQ(cli("verify --checks no_such_check --out " + path("r.json")).code, 2);
}

TEST_F(CliTest, ComputeReportsPerQuantityErrors)
{
    // Polytopes have no curvature, so only the affine surface area fails.
    auto const r = cli("compute --body " + sample("square.json")
                       + " --quantities volume,affine_surface_area --p 1");
    ASSERT_EQ(r.code, 0);
    auto const j = Json::parse(r.out);
    EXPECT_TRUE(j.at("results").contains("volume"));
    EXPECT_TRUE(j.at("errors").contains("affine_surface_area"));
    EXPECT_EQ(cli("compute --body " + sample("square.json")
                  + " --quantities affine_surface_area --p 1")
                  .code,
              2);
}

TEST_F(CliTest, GenerateThenCompute)
{
    auto const body = path("hull.json");
    ASSERT_EQ(cli("generate --kind polytope-hull --dim 3 --size 12 --seed 7 --out " + body).code,
              0);
    auto const k = load_body(body);
    EXPECT_EQ(k.dim(), 3);
    auto const r = cli("compute --body " + body + " --quantities volume,centroid");
    ASSERT_EQ(r.code, 0);
    auto const j = Json::parse(r.out);
    EXPECT_NEAR(j.at("results").at("volume").at("value").get<double>(), volume(k),
                1e-12 * volume(k));
    // Same seed, same file.
    auto const again = path("hull2.json");
    ASSERT_EQ(cli("generate --kind polytope-hull --dim 3 --size 12 --seed 7 --out " + again).code,
              0);
    EXPECT_EQ(slurp(body), slurp(again));
}

TEST_F(CliTest, VerifyExitCodesAndReplay)
{
    auto const report = path("report.json");
    auto const ok = cli("verify --checks santalo_style,vp_exactness --out " + report);
    ASSERT_EQ(ok.code, 0);
    auto const rep = Json::parse(slurp(report));
    EXPECT_EQ(rep.at("summary").at("fail").get<int>(), 0);
    EXPECT_GT(rep.at("results").size(), 10u);

    // A Bourgain-Milman constant of 1 is false for the square: the premise fails.
    auto const cfg = write("c1.json", R"({"bm_constant": 1, "checks": ["santalo_style"]})");
    auto const failing = path("failing.json");
    ASSERT_EQ(cli("verify --config " + cfg + " --out " + failing).code, 1);
    auto const bad = Json::parse(slurp(failing));
    ASSERT_FALSE(bad.at("failures").empty());
    EXPECT_EQ(bad.at("header").at("config").at("bm_constant").get<double>(), 1);

    auto const inst = write("instance.json", bad.at("failures").at(0).dump());
    auto const rerun = cli("verify --config " + cfg + " --replay " + inst);
    EXPECT_EQ(rerun.code, 1);
    auto const arr = Json::parse(rerun.out);
    bool any_fail = false;
    for (auto const& r : arr)
        any_fail = any_fail || r.at("verdict") == "fail";
    EXPECT_TRUE(any_fail);

    auto const malformed = write("m.json", R"({"bm_constant": "big"})");
    EXPECT_EQ(cli("verify --config " + malformed + " --out " + path("x.json")).code, 2);
}

TEST_F(CliTest, VerifyCsvAndSeedDeterminism)
{
    auto const a = path("a.csv"), b = path("b.csv");
    ASSERT_EQ(cli("verify --checks cyclic --seed 11 --format csv --out " + a).code, 0);
    ASSERT_EQ(cli("verify --checks cyclic --seed 11 --format csv --out " + b).code, 0);
    auto const text = slurp(a);
    EXPECT_EQ(text, slurp(b));
    EXPECT_EQ(text.rfind("check_id,instance_id,lhs,rhs,margin,verdict\n", 0), 0u);
}
