// End-to-end checks of the command-line binary: golden output rows, exit
// codes, CSV/JSON formats, the metadata sidecar, and byte determinism.
// The binary path arrives via the STOPAREA_CLI_PATH compile definition.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with the given arguments, capturing stdout; stderr is dropped.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(STOPAREA_CLI_PATH) + " " + args +
                          " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("density subcommand prints the golden closed-form row", "[cli]") {
  const auto r = run_cli("density --alpha 2 --x 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  REQUIRE(lines[0] == "x,value,regime,error_bound");
  const auto cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 4);
  REQUIRE(std::stod(cells[0]) == 1.0);
  REQUIRE(std::abs(std::stod(cells[1]) - 0.16058370426062458) <= 1e-9);
  REQUIRE(cells[2] == "series");
  REQUIRE(std::stod(cells[3]) >= 0.0);
}

TEST_CASE("moments subcommand at the degenerate index", "[cli]") {
  const auto r = run_cli("moments --alpha 1 --s 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  REQUIRE(lines[0] == "s,value");
  REQUIRE(std::abs(std::stod(split_csv(lines[1])[1]) - 0.5) <= 1e-12);
}

TEST_CASE("cdf subcommand walks a log grid monotonically", "[cli]") {
  const auto r = run_cli("cdf --alpha 1.5 --x 0.01:100:20 --log-x");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 21);
  double prev = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double c = std::stod(split_csv(lines[i])[1]);
    REQUIRE(c >= prev);
    prev = c;
  }
}

TEST_CASE("exit codes distinguish usage, tolerance, success", "[cli]") {
  REQUIRE(run_cli("density --alpha 1.5 --x 1").exit_code == 0);
  REQUIRE(run_cli("definitely-not-a-subcommand").exit_code == 2);
  REQUIRE(run_cli("density --alpha 3").exit_code == 2);   // out of range
  REQUIRE(run_cli("density --alpha 1.5 --x 1 --no-such-flag").exit_code == 2);
  // Out-of-domain requests are usage errors too.
  REQUIRE(run_cli("density --alpha 1.5 --x -1").exit_code == 2);
  REQUIRE(run_cli("moments --alpha 1.5 --s 0.45").exit_code == 2);
  // An uncertifiable tolerance request maps to the numerical-failure code.
  REQUIRE(run_cli("cdf --alpha 1.5 --x 1 --eps 1e-18").exit_code == 3);
}

TEST_CASE("asymptote subcommand emits both regimes", "[cli]") {
  const auto tail = run_cli("asymptote --alpha 1.5 --x 1000000 --tail");
  REQUIRE(tail.exit_code == 0);
  const auto trow = split_csv(split_lines(tail.out)[1]);
  REQUIRE(trow[2] == "tail_asymptote");
  // tail_const * x^{-1/(alpha+1)-1} with the frozen constant for alpha=1.5.
  const double ref = 0.12570237598256882 * std::pow(1e6, -1.4);
  REQUIRE(std::abs(std::stod(trow[1]) - ref) <= 1e-12 * ref);

  const auto zero = run_cli("asymptote --alpha 1.5 --x 0.05");
  REQUIRE(zero.exit_code == 0);
  const auto zrow = split_csv(split_lines(zero.out)[1]);
  REQUIRE(zrow[2] == "zero_asymptote");
  REQUIRE(std::stod(zrow[1]) > 0.0);
}

TEST_CASE("sample writes csv with a metadata sidecar", "[cli]") {
  const std::string path = "cli_sample_test.csv";
  const std::string side = path + ".meta.json";
  std::remove(path.c_str());
  std::remove(side.c_str());
  const auto r =
      run_cli("sample --alpha 1.5 --n 500 --seed 99 --out " + path);
  REQUIRE(r.exit_code == 0);
  const std::string body = slurp(path);
  const auto lines = split_lines(body);
  REQUIRE(lines.size() == 501);
  REQUIRE(lines[0] == "value");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    REQUIRE(std::stod(lines[i]) > 0.0);
  }
  const std::string meta = slurp(side);
  REQUIRE(meta.find("\"command\": \"sample\"") != std::string::npos);
  REQUIRE(meta.find("\"seed\": 99") != std::string::npos);
  REQUIRE(meta.find("\"law_tag\": \"area\"") != std::string::npos);

  // Identical invocations must be byte-identical.
  const std::string path2 = "cli_sample_test_2.csv";
  run_cli("sample --alpha 1.5 --n 500 --seed 99 --out " + path2);
  REQUIRE(slurp(path2) == body);
  std::remove(path.c_str());
  std::remove(side.c_str());
  std::remove(path2.c_str());
  std::remove((path2 + ".meta.json").c_str());
}

TEST_CASE("json format emits one object per row", "[cli]") {
  const auto r = run_cli("moments --alpha 1.5 --s 0:0.2:3 --format json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.front() == '[');
  std::size_t objects = 0;
  for (char c : r.out) objects += c == '{';
  REQUIRE(objects == 3);
  REQUIRE(r.out.find("\"s\": ") != std::string::npos);
  REQUIRE(r.out.find("\"value\": ") != std::string::npos);
}

TEST_CASE("restricted verify runs are byte-deterministic", "[cli]") {
  const auto a = run_cli("verify --alpha 1.5 --seed 7");
  const auto b = run_cli("verify --alpha 1.5 --seed 7");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  const auto lines = split_lines(a.out);
  REQUIRE(lines.size() > 1);
  REQUIRE(lines[0] == "id,passed,detail");
  // Every criterion row in the restricted run reports a pass.
  for (std::size_t i = 1; i < lines.size(); ++i) {
    REQUIRE(split_csv(lines[i])[1] == "1");
  }
}

TEST_CASE("simulate-path reports horizon failures in the sidecar", "[cli]") {
  const std::string path = "cli_path_test.csv";
  const auto r = run_cli(
      "simulate-path --alpha 1.5 --n 50 --seed 7 --dt 0.05 "
      "--observable hitting-time --out " + path);
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(slurp(path));
  REQUIRE(lines.size() == 51);
  const std::string meta = slurp(path + ".meta.json");
  REQUIRE(meta.find("\"horizon_failures\": 0") != std::string::npos);
  REQUIRE(meta.find("\"law_tag\": \"hitting_time\"") != std::string::npos);
  std::remove(path.c_str());
  std::remove((path + ".meta.json").c_str());
}
