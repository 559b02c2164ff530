#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "alqhd/pauli.hpp"
#include "json.hpp"

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

/// Run the installed command-line binary with the given arguments and capture
/// its combined output and exit code.
CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ALQHD_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed for: " + cmd);
  CmdResult r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data_path(const std::string& name) {
  return std::string(ALQHD_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<nlohmann::json> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<nlohmann::json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(nlohmann::json::parse(line));
  }
  return rows;
}

}  // namespace

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);           // unknown subcommand
  EXPECT_EQ(run_cli("").exit_code, 2);                     // missing subcommand
  EXPECT_EQ(run_cli("bench-ackley --zoom 0").exit_code, 2);  // zoom depth must be positive
  EXPECT_EQ(run_cli("bench-ackley --eta 1.5").exit_code, 2); // mass threshold outside (0,1)
}

TEST(Cli, HelpExitsCleanly) {
  const CmdResult top = run_cli("--help");
  EXPECT_EQ(top.exit_code, 0);
  EXPECT_NE(top.output.find("bench-ackley"), std::string::npos);
  EXPECT_NE(top.output.find("resources"), std::string::npos);
  EXPECT_EQ(run_cli("bench-rastrigin --help").exit_code, 0);
}

TEST(Cli, ParseCaseSummarizesNetwork) {
  const CmdResult r = run_cli("parse-case " + data_path("case3.m"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("buses     3"), std::string::npos);
  EXPECT_NE(r.output.find("gens      2"), std::string::npos);
}

TEST(Cli, ParseCaseRejectsMalformedFileWithLineNumber) {
  const CmdResult r = run_cli("parse-case " + data_path("case_bad.m"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error:"), std::string::npos);
  EXPECT_NE(r.output.find("line"), std::string::npos);
}

TEST(Cli, MissingInputFileExitsWithOne) {
  const CmdResult r = run_cli("parse-case /nonexistent/net.m");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("error:"), std::string::npos);
}

TEST(Cli, BenchAckleyEmitsRunRecords) {
  const std::string out = ::testing::TempDir() + "cli_ackley.jsonl";
  const CmdResult r =
      run_cli("bench-ackley --zoom 1 --grid 16 --steps 1000 --baseline-starts 1 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_records(out);
  ASSERT_EQ(rows.size(), 2u);  // one refinement row, one baseline row
  for (const auto& rec : rows) {
    EXPECT_EQ(rec.at("schema").get<std::string>(), "alqhd.run/1");
    EXPECT_EQ(rec.at("command").get<std::string>(), "bench-ackley");
    ASSERT_TRUE(rec.contains("config"));
    ASSERT_TRUE(rec.contains("row"));
  }
  const auto& cfg = rows[0].at("config");
  EXPECT_EQ(cfg.at("grid").get<int>(), 16);
  EXPECT_EQ(cfg.at("steps").get<long long>(), 1000);
  EXPECT_FALSE(cfg.contains("out"));  // output path must not leak into the echoed config
  const auto& row = rows[0].at("row");
  EXPECT_EQ(row.at("kind").get<std::string>(), "refine");
  EXPECT_TRUE(std::isfinite(row.at("objective").get<double>()));
  EXPECT_EQ(row.at("position").size(), 2u);
  EXPECT_EQ(rows[1].at("row").at("kind").get<std::string>(), "baseline");
}

TEST(Cli, EncodeRoundTripsThroughSerializedHamiltonian) {
  // One-variable quartic-free polynomial on [0,2] sampled at 4 points:
  // the encoded diagonal evaluated on each one-hot basis state must equal
  // the expression value at that sample.
  const std::string expr_path = ::testing::TempDir() + "cli_expr.json";
  {
    std::ofstream out(expr_path);
    out << R"({"dim": 1, "lower": [0.0], "upper": [2.0], "resolutions": [4],
               "terms": [{"coeff": 2.0, "factors": [{"var": 0, "power": 2}]},
                         {"coeff": -1.0, "factors": [{"var": 0, "power": 1}]}]})";
  }
  const std::string ham_path = ::testing::TempDir() + "cli_ham.txt";
  const CmdResult r = run_cli("encode " + expr_path + " --out " + ham_path);
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const alqhd::ZStringHamiltonian h = alqhd::deserialize(slurp(ham_path));
  const std::vector<std::size_t> res{4};
  const alqhd::QubitLayout layout = alqhd::QubitLayout::from_resolutions(res);
  for (std::size_t k = 0; k < 4; ++k) {
    const double x = 0.0 + static_cast<double>(k) * 2.0 / 4.0;
    const std::size_t assignment[] = {k};
    EXPECT_NEAR(alqhd::diagonal_on_onehot(h, assignment, layout), 2.0 * x * x - x, 1e-12)
        << "sample " << k;
  }
}

TEST(Cli, ResourcesReadsNetworkFile) {
  const std::string out = ::testing::TempDir() + "cli_res.jsonl";
  const CmdResult r = run_cli("resources " + data_path("case3.m") + " --sizes 2,3 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  const auto rows = read_records(out);
  // two size rows; fewer than three sizes means no scaling-fit row
  ASSERT_EQ(rows.size(), 2u);
  // the 2-bus subgraph keeps one generator: 2*2 - 1 angles/magnitudes + 2 setpoints
  EXPECT_EQ(rows[0].at("row").at("n_vars").get<int>(), 5);
  EXPECT_GT(rows[1].at("row").at("ft_t_total").get<double>(), 0);
}
