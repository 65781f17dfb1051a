#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbdiam/families.hpp"
#include "orbdiam/io.hpp"

using namespace orbdiam;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("orbdiam_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  RunResult run(const std::string& args, const std::string& env = "") const {
    const auto out = path("stdout.txt");
    const std::string cmd = env + " '" ORBDIAM_CLI_PATH "' -q " + args + " > '" + out.string() + "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST(ParseInstance, RoundTrip) {
  const auto inst = sl_natural(2, 5);
  const auto back = parse_instance(instance_json(inst));
  EXPECT_EQ(back.label, inst.label);
  EXPECT_EQ(back.p, inst.p);
  EXPECT_EQ(back.d, inst.d);
  EXPECT_EQ(back.generators, inst.generators);
}

TEST(ParseInstance, Errors) {
  const auto bad = [](const char* text) { return parse_instance(Json::parse(text)); };
  EXPECT_THROW(bad(R"([1,2])"), ParseError);
  EXPECT_THROW(bad(R"({"p": 4, "d": 1, "generators": [[[1]]]})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 2, "generators": [[[1]]]})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 1, "generators": [[[5]]]})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 1, "generators": [[[0]]]})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 1, "generators": []})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 1})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 3, "d": 30, "generators": [[[1]]]})"), ParseError);
  EXPECT_THROW(bad(R"({"p": 5, "d": 1, "generators": [[["x"]]]})"), ParseError);
  EXPECT_NO_THROW(bad(R"({"p": 5, "d": 1, "generators": [[[2]]]})"));
}

TEST_F(CliTest, FamilyThenDiameter) {
  ASSERT_EQ(run("family wreath --p 3 -o '" + path("w3.json").string() + "'").code, 0);
  const auto r = run("diameter '" + path("w3.json").string() + "'");
  ASSERT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("group_order"), 24);
  const auto& d = j.at("diameter");
  EXPECT_EQ(d.at("overall_directed_diameter"), 3);
  EXPECT_EQ(d.at("orbit_count"), 3);
  EXPECT_EQ(d.at("trivial_bound"), 6);
}

TEST_F(CliTest, ReportsAreByteStable) {
  ASSERT_EQ(run("family sym2 --p 7 -o '" + path("s.json").string() + "'").code, 0);
  const auto a = run("certify '" + path("s.json").string() + "'");
  const auto b = run("certify '" + path("s.json").string() + "' --threads 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto j = Json::parse(a.out);
  EXPECT_EQ(j.at("certification").at("status"), "verified");
  EXPECT_EQ(j.at("certification").at("verified"), true);
}

TEST_F(CliTest, DiameterMethodsAgree) {
  ASSERT_EQ(run("family singer --p 7 --d 2 --extra 3 -o '" + path("s.json").string() + "'").code, 0);
  const auto layered = Json::parse(run("diameter '" + path("s.json").string() + "' --method layered").out)["diameter"];
  const auto bfs = Json::parse(run("diameter '" + path("s.json").string() + "' --method bfs").out)["diameter"];
  EXPECT_EQ(layered.at("orbits").size(), bfs.at("orbits").size());
  for (std::size_t i = 0; i < layered.at("orbits").size(); ++i)
    EXPECT_EQ(layered["orbits"][i]["directed_diameter"], bfs["orbits"][i]["directed_diameter"]);
}

TEST_F(CliTest, ExitCodes) {
  write("bad.json", "{ not json");
  EXPECT_EQ(run("diameter '" + path("bad.json").string() + "'").code, 2);
  EXPECT_EQ(run("diameter '" + path("missing.json").string() + "'").code, 2);

  write("borel.json", R"({"label": "borel", "p": 5, "d": 2, "generators": [[[1,1],[0,1]]]})");
  EXPECT_EQ(run("diameter '" + path("borel.json").string() + "'").code, 4);

  ASSERT_EQ(run("family singer --p 3 --d 2 -o '" + path("singer.json").string() + "'").code, 0);
  const auto na = run("certify '" + path("singer.json").string() + "'");
  EXPECT_EQ(na.code, 5);
  EXPECT_EQ(Json::parse(na.out).at("certification").at("status"), "not_applicable");

  ASSERT_EQ(run("family gl --p 5 --d 2 -o '" + path("gl.json").string() + "'").code, 0);
  EXPECT_EQ(run("diameter '" + path("gl.json").string() + "' --cap 10").code, 3);
  EXPECT_EQ(run("diameter '" + path("gl.json").string() + "'", "ORBDIAM_CAP=10").code, 3);
  EXPECT_EQ(run("diameter '" + path("gl.json").string() + "' --cap 100000", "ORBDIAM_CAP=10").code, 0);

  EXPECT_EQ(run("power-sums --p 11 --k 2 --m 1 --rhs 1,2").code, 8);
  EXPECT_EQ(run("power-sums --p 37 --k 2 --m 12 --rhs 0,4 --budget 100").code, 7);
  EXPECT_EQ(run("nonsense").code, 1);
}

TEST_F(CliTest, PowerSums) {
  const auto sol = run("power-sums --p 37 --k 2 --m 6 --rhs 0,4");
  ASSERT_EQ(sol.code, 0);
  EXPECT_FALSE(sol.out.empty());
  const auto csv = run("power-sums --p 5 --k 2 --frontier 2");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out, frontier_csv(solvability_frontier(5, 2, 2)));
}
