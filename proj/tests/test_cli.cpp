#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "ndist/errors.hpp"
#include "ndist/scenario.hpp"

namespace fs = std::filesystem;
using namespace ndist;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(NDIST_CLI) + " " + args + " 2>&1";
  Run r{0, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (auto n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const fs::path& scratch_root() {
  static const fs::path root = fs::temp_directory_path() / ("ndist_cli_test_" + std::to_string(::getpid()));
  static const struct Cleanup {
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(root, ec);
    }
  } cleanup;
  return root;
}

fs::path scratch(const std::string& name) {
  const auto dir = scratch_root() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int error_line(const std::string& text) {
  try {
    validate_scenario(parse_scenario(text));
  } catch (const ScenarioError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("scenario parse and validation errors carry line numbers") {
  CHECK(error_line("system = rotation\n\n[distality_report]\nhorizon = ten\n") == 3);
  CHECK(error_line("system = rotation\nbogus = 1\n") == 2);
  CHECK(error_line("# comment\nsystem = rotation\n[no_such_op]\n") == 3);
  CHECK(error_line("system = rotation\n[distality_report\n") == 2);
  CHECK(error_line("system = rotation\n[distality_report]\nhorizon = 3\nhorizon = 4\n") == 4);
  CHECK(error_line("system = rotation\ncloud = sample:x\n[distality_report]\n") == 2);
  CHECK(error_line("seed = 3\nsystem = nowhere\n[distality_report]\n") == 2);
  CHECK(error_line("system = rotation\n[r_set]\ndelta\n") == 3);
  CHECK(error_line("system = rotation\n[distality_report]\nhorizon = 50   # trailing comment\n") == -1);

  const auto s = parse_scenario("system = shift2\nseed = 9\n[word_count_entropy]\nn = 4\n[periodic_points]\n", "x");
  CHECK(s.seed == 9);
  REQUIRE(s.analyses.size() == 2);
  CHECK(s.analyses[0].op == "word_count_entropy");
  CHECK(s.analyses[0].params == std::vector<std::pair<std::string, std::string>>{{"n", "4"}});
  CHECK(s.analyses[1].line == 5);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  const auto bad = write_file(dir, "bad.scn", "system = nosuch\n[distality_report]\n");
  auto r = cli("run " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("line 1") != std::string::npos);

  const auto typo = write_file(dir, "typo.scn", "system = rotation\n\n[distality_report]\nn_max = many\n");
  r = cli("run " + typo.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);

  CHECK(cli("proximal --system nosuch").code == 2);
  CHECK(cli("no-such-command").code == 2);

  // an asserting analysis that fails gives exit 1
  const auto wrong =
      write_file(dir, "wrong.scn", "system = rotation\ncloud = sample:32\n[distality_report]\nhorizon = 50\nexpect_max_cell = 2\n");
  CHECK(cli("--out " + (dir / "w").string() + " run " + wrong.string()).code == 1);
}

TEST_CASE("scenario suite passes") {
  for (const auto& e : fs::directory_iterator(NDIST_SCENARIOS)) {
    if (e.path().extension() != ".scn") continue;
    const auto out = scratch("suite_" + e.path().stem().string());
    const auto r = cli("--out " + out.string() + " run " + e.path().string());
    CHECK_MESSAGE(r.code == 0, std::string(e.path().filename().string() + ": " + r.out));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "timings.json"));
  }
}

TEST_CASE("annulus3 scenario report") {
  const auto out = scratch("a3");
  REQUIRE(cli("--out " + out.string() + " run " + std::string(NDIST_SCENARIOS) + "/annulus3.scn").code == 0);
  const auto j = nlohmann::ordered_json::parse(slurp(out / "report.json"));
  CHECK(j["summary"]["pass"] == true);
  CHECK(j["results"][0]["result"]["value"]["max_cell_size"] == 3);
  CHECK(j["results"][1]["result"]["value"]["passed"] == true);
  // field order is fixed
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"scenario", "results", "summary"});
  // cells and edges tables
  const auto cells = slurp(out / "00_distality_report_cells.csv");
  CHECK(cells.rfind("base,size,members\n", 0) == 0);
  const auto edges = slurp(out / "00_distality_report_edges.csv");
  CHECK(edges.rfind("a,b,min_distance\n", 0) == 0);
}

TEST_CASE("shift2 word count entropy through the CLI") {
  const auto out = scratch("words");
  REQUIRE(cli("--out " + out.string() + " run " + std::string(NDIST_SCENARIOS) + "/shift2_words.scn").code == 0);
  const auto j = nlohmann::json::parse(slurp(out / "report.json"));
  const double v = j["results"][0]["result"]["value"]["value"];
  CHECK(std::fabs(v - std::log(2.0)) <= 1e-12);
  CHECK(j["results"][0]["result"]["value"]["cells"][11] == 4096);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  for (const char* name : {"annulus3.scn", "skew_torus.scn", "rotation.scn"}) {
    const std::string scn = std::string(NDIST_SCENARIOS) + "/" + name;
    std::string first;
    for (const char* threads : {"1", "3", "1"}) {
      const auto out = scratch(std::string("det_") + threads);
      REQUIRE(cli("--threads " + std::string(threads) + " --out " + out.string() + " run " + scn).code == 0);
      const auto rep = slurp(out / "report.json");
      if (first.empty()) first = rep;
      CHECK_MESSAGE(rep == first, name);
    }
  }
}

TEST_CASE("direct subcommands") {
  auto r = cli("list-systems");
  CHECK(r.code == 0);
  for (const char* id : {"rotation", "skew_torus", "annulus3", "annulusN", "annulus2", "shift2", "identity"})
    CHECK(r.out.find(std::string("\n") + id) != std::string::npos);
  CHECK(cli("list-systems --ops").out.find("distality_report") != std::string::npos);

  const auto out = scratch("direct");
  r = cli("--out " + (out / "p").string() + " proximal --system annulus3 --cloud annulus:10,10 --horizon 40 --eps 1e-3 --n-max 3");
  CHECK(r.code == 0);
  const auto rep = nlohmann::json::parse(slurp(out / "p" / "report.json"));
  CHECK(rep["results"][0]["result"]["params"]["horizon"] == "40");
  CHECK(rep["results"][0]["result"]["value"]["max_cell_size"] == 3);

  r = cli("--out " + (out / "e").string() + " equicont --system skew_torus --cloud skew_witness:2 --n 2 --eps 0.2 --delta-grid 0.02,0.01");
  CHECK(r.code == 0);
  CHECK(slurp(out / "e" / "00_n_equicontinuity_probe_witness.csv").rfind("index,point,delta,n\n", 0) == 0);

  r = cli("--out " + (out / "s").string() + " structure --system shift2 --cloud shift_periodic:6 --audit periodic -p T_max=6");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(out / "s" / "report.json"))["results"][0]["result"]["value"]["count"] == 64);

  // symbolic rows: word, index of its first symbol
  const auto rows = write_file(out, "words.csv", "0\n1\n0,3\n111,-1\n");
  r = cli("ndiam --csv " + rows.string() + " --metric shift --n 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"value_lower\": 0.5") != std::string::npos);
  const auto pts = write_file(out, "pts.csv", "0,0\n1,0\n0,1\n1,1\n");
  r = cli("ndiam --csv " + pts.string() + " --metric euclid -N 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"value_upper\": 1") != std::string::npos);
}
