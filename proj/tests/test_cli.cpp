#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "grgsimple/geometry.hpp"
#include "grgsimple/graph.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome run_cli(const std::string& args) {
  const std::string cmd = std::string(GRGSIMPLE_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) o.out += buf;
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("grgsimple_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST_F(Cli, HelpAndMissingSubcommand) {
  EXPECT_EQ(run_cli("--help").status, 0);
  EXPECT_NE(run_cli("").status, 0);
  EXPECT_NE(run_cli("frobnicate").status, 0);
}

TEST_F(Cli, BadFlagsFail) {
  EXPECT_NE(run_cli("generate --n 100 --k 0.7").status, 0);
  EXPECT_NE(run_cli("generate --n 100 --k 0.3 --r 2").status, 0);
  EXPECT_NE(run_cli("generate --n 100 --k 0.3 --boundary disk").status, 0);
  EXPECT_NE(run_cli("sweep --experiment complexity-dense").status, 0);
  const auto bad_seeds = run_cli("reconstruct --n 100 --k 0.3 --seeds wat");
  EXPECT_EQ(bad_seeds.status, 1);
  EXPECT_NE(bad_seeds.out.find("error:"), std::string::npos);
  EXPECT_EQ(run_cli("generate --n 100").status, 1);  // neither --k nor --r
}

TEST_F(Cli, GenerateWritesBothFiles) {
  const auto res = run_cli("generate --n 300 --k 0.3 --rng-seed 5 --boundary square --coords " + path("pts.txt") +
                           " --edge-list " + path("edges.txt"));
  ASSERT_EQ(res.status, 0) << res.out;
  EXPECT_NE(res.out.find("nodes="), std::string::npos);
  EXPECT_NE(res.out.find("connected="), std::string::npos);

  std::ifstream pts(path("pts.txt"));
  const auto ps = grgsimple::read_point_set(pts);
  EXPECT_EQ(ps.domain.boundary(), grgsimple::Boundary::Square);
  EXPECT_EQ(ps.rng_seed, 5u);

  std::ifstream edges(path("edges.txt"));
  const auto el = grgsimple::read_edge_list(edges);
  EXPECT_EQ(el.graph.node_count(), ps.size());
  EXPECT_EQ(el.boundary, "square");
  EXPECT_EQ(el.graph, grgsimple::build_grg(ps, el.r).topology);
}

TEST_F(Cli, ReconstructRecoversEdgeList) {
  ASSERT_EQ(run_cli("generate --n 400 --k 0.3 --rng-seed 2 --coords " + path("pts.txt") + " --edge-list " +
                    path("truth.txt"))
                .status,
            0);
  const auto res = run_cli("reconstruct --k 0.3 --coords " + path("pts.txt") + " --seeds count:20 --out " +
                           path("row.csv") + " --edge-list " + path("recovered.txt"));
  ASSERT_EQ(res.status, 0) << res.out;
  EXPECT_EQ(slurp(path("truth.txt")), slurp(path("recovered.txt")));
  const std::string csv = slurp(path("row.csv"));
  EXPECT_EQ(csv.rfind("# schema=grgsimple-results/1", 0), 0u);
  EXPECT_NE(csv.find("reconstruct,trial,"), std::string::npos);
  EXPECT_NE(csv.find("count:20"), std::string::npos);
  EXPECT_EQ(csv.find("mismatch"), std::string::npos);
}

TEST_F(Cli, NonEdgeAndSweepAndBounds) {
  const auto ne = run_cli("nonedge --n 500 --r 5 --seeds optimal4");
  ASSERT_EQ(ne.status, 0) << ne.out;
  EXPECT_NE(ne.out.find("optimal4"), std::string::npos);

  const auto sweep = run_cli("sweep --experiment complexity-dense --n 100,200 --iterations 2 --threads 1 --out " +
                             path("sweep.csv"));
  ASSERT_EQ(sweep.status, 0) << sweep.out;
  std::istringstream in(slurp(path("sweep.csv")));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 2u + 2u * 3u);

  const auto bounds = run_cli("bounds --n 100,1000 --k 0.1");
  ASSERT_EQ(bounds.status, 0);
  EXPECT_EQ(bounds.out.rfind("n,k,curve_value\n100,0.1,", 0), 0u);
}

TEST_F(Cli, MissingCoordsFileIsAnError) {
  const auto res = run_cli("reconstruct --k 0.3 --coords " + path("absent.txt"));
  EXPECT_EQ(res.status, 1);
  EXPECT_NE(res.out.find("cannot open"), std::string::npos);
}

}  // namespace
