#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ndist/report_json.hpp"
#include "ndist/system.hpp"

namespace ndist {

struct Analysis {
  std::string op;
  std::vector<std::pair<std::string, std::string>> params;
  int line = 0;
};

// Flat text format: global `key = value` lines (system, seed, cloud, output), then
// one `[op]` section per analysis with its own `key = value` lines. `#` starts a comment.
struct Scenario {
  std::string name;
  std::string system;
  std::uint64_t seed = 0;
  std::string cloud = "default";
  std::string output;
  std::vector<Analysis> analyses;
  int system_line = 0;
  int cloud_line = 0;
};

Scenario parse_scenario(std::string_view text, std::string name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);
// Resolves the system, the cloud spec and every op parameter; throws ScenarioError.
void validate_scenario(const Scenario& s);

// names of the ops a scenario can run
std::vector<std::string> scenario_ops();
// "key:type=default" lines for one op
std::vector<std::string> op_signature(const std::string& op);

// cloud specs: default | sample:R | random:K | annulus:C,O | shift_periodic:n | skew_witness:N | de_bruijn:n
PointCloud build_cloud(const System& sys, const std::string& spec, std::uint64_t seed);

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct AuditReport {
  Json report;
  bool passed = false;
  std::vector<std::pair<std::size_t, Table>> tables;  // analysis index, table
  std::vector<std::pair<std::string, double>> timings;  // op, seconds
};

AuditReport run_scenario(const Scenario& s);
// report.json, one CSV per table, timings.json (kept out of the report so it stays byte-stable)
void write_report(const AuditReport& r, const std::filesystem::path& dir);

std::string catalogue_table();

}  // namespace ndist
