#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ndist/catalogue.hpp"
#include "ndist/errors.hpp"
#include "ndist/ndiameter.hpp"
#include "ndist/parallel.hpp"
#include "ndist/report_json.hpp"
#include "ndist/scenario.hpp"

using namespace ndist;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
};

struct Direct {
  std::string system;
  std::string op;
  std::string cloud = "default";
  std::vector<std::string> params;
};

int finish(const AuditReport& r, const std::string& out, bool print_report) {
  if (!out.empty()) write_report(r, out);
  if (print_report) std::cout << r.report.dump(2) << '\n';
  else std::cout << "summary: " << (r.passed ? "pass" : "fail") << '\n';
  return r.passed ? 0 : 1;
}

int run_direct(const Direct& d, const Globals& g) {
  Scenario s;
  s.name = d.op;
  s.system = d.system;
  s.cloud = d.cloud;
  s.seed = g.seed.value_or(0);
  Analysis a{d.op, {}, 0};
  for (const auto& p : d.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ScenarioError(0, "parameter '" + p + "' is not key=value");
    a.params.emplace_back(p.substr(0, eq), p.substr(eq + 1));
  }
  s.analyses.push_back(a);
  validate_scenario(s);
  return finish(run_scenario(s), g.out, true);
}

void add_direct(CLI::App& sub, Direct& d, const std::string& default_op, std::vector<std::string> ops) {
  sub.add_option("--system", d.system, "system id, e.g. annulus3 or product(annulus2,annulus3)")->required();
  d.op = default_op;
  sub.add_option("--op", d.op, "analysis to run")->check(CLI::IsMember(std::move(ops)));
  sub.add_option("--cloud", d.cloud, "cloud spec: default | sample:R | random:K | annulus:C,O | shift_periodic:n | skew_witness:N | de_bruijn:n");
  sub.add_option("-p,--param", d.params, "analysis parameter key=value (repeatable)");
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

// one symbolic point per line: a binary word and the index of its first symbol (default 0), zero fill
Eigen::MatrixXd shift_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot read " + path);
  const auto sh = shift2();
  std::vector<Point> pts;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::int64_t offset = comma == std::string::npos ? 0 : std::stoll(line.substr(comma + 1));
    pts.push_back(canonical(Symbol::finite(parse_word(line.substr(0, comma)), offset)));
  }
  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      D(i, j) = D(j, i) = sh->distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
  return D;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ndist: N-distality toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "seed for random clouds and probe times");
  app.add_option("--out", g.out, "output directory for report.json and CSV tables");
  app.add_option("--threads", g.threads, "worker threads (0: hardware concurrency)");

  std::string scenario_path;
  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("scenario", scenario_path, "scenario file")->required();

  bool show_ops = false;
  auto* list = app.add_subcommand("list-systems", "catalogue of systems with their known facts");
  list->add_flag("--ops", show_ops, "also list scenario analyses and their parameters");

  Direct prox, equi, structure, ent, nd;
  // shorthand flags that become analysis parameters
  std::string horizon, eps, n_max, eq_n, eq_eps, delta_grid, audit;
  auto* p = app.add_subcommand("proximal", "proximal cells and distality verdicts");
  add_direct(*p, prox, "distality_report", {"distality_report", "proximal_cell", "cell_growth", "proximal_quotient"});
  p->add_option("--horizon", horizon, "horizon H");
  p->add_option("--eps", eps, "proximality threshold");
  p->add_option("--n-max", n_max, "largest N for the verdict");
  auto* e = app.add_subcommand("equicont", "R_delta sets and the N-equicontinuity probe");
  add_direct(*e, equi, "n_equicontinuity_probe", {"n_equicontinuity_probe", "r_set"});
  e->add_option("--n", eq_n, "N");
  e->add_option("--eps", eq_eps, "epsilon");
  e->add_option("--delta-grid", delta_grid, "descending comma-separated deltas");
  auto* st = app.add_subcommand("structure", "periodic, almost periodic, minimal and expansive structure");
  add_direct(*st, structure, "theorem_3_5_audit",
             {"periodic_points", "return_profile", "almost_periodic", "minimal_subsystems", "transitive_check",
              "expansivity_probe", "theorem_3_5_audit", "prop_3_2_audit"});
  const std::map<std::string, std::string> audits = {{"minimal", "minimal_subsystems"},
                                                     {"transitive", "transitive_check"},
                                                     {"thm35", "theorem_3_5_audit"},
                                                     {"prop32", "prop_3_2_audit"},
                                                     {"expansive", "expansivity_probe"},
                                                     {"periodic", "periodic_points"}};
  st->add_option("--audit", audit, "minimal | transitive | thm35 | prop32 | expansive | periodic")
      ->check(CLI::IsMember(audits));
  std::string method = "partition";
  auto* en = app.add_subcommand("entropy", "partition, word-count and geometric-partition entropy");
  en->add_option("--system", ent.system, "system id")->required();
  en->add_option("--method", method, "estimator")->check(CLI::IsMember({"partition", "words", "ksbound"}));
  en->add_option("--cloud", ent.cloud, "cloud spec");
  en->add_option("-p,--param", ent.params, "analysis parameter key=value (repeatable)");

  std::string csv, metric = "euclid";
  int N = 2;
  auto* ndc = app.add_subcommand("ndiam", "N-diameter of a cloud snapshot or of coordinate rows");
  ndc->add_option("--system", nd.system, "system id (cloud mode)");
  ndc->add_option("--cloud", nd.cloud, "cloud spec");
  ndc->add_option("-p,--param", nd.params, "analysis parameter key=value (repeatable)");
  ndc->add_option("--csv", csv, "coordinate rows, one point per line");
  ndc->add_option("--metric", metric, "metric for --csv rows (shift rows are `bits[,offset]`)")
      ->check(CLI::IsMember({"euclid", "torus", "shift"}));
  ndc->add_option("-N,--n", N, "N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }
  if (g.threads > 0) set_thread_count(g.threads);

  try {
    if (*run) {
      Scenario s;
      try {
        s = load_scenario(scenario_path);
        if (g.seed) s.seed = *g.seed;
        validate_scenario(s);
      } catch (const ScenarioError& err) {
        std::cerr << scenario_path << ": " << err.what() << '\n';
        return 2;
      }
      std::string out = g.out;
      if (out.empty()) out = s.output.empty() ? "out/" + s.name : s.output;
      const auto r = run_scenario(s);
      std::cout << "report: " << out << "/report.json\n";
      return finish(r, out, false);
    }
    if (*list) {
      std::cout << catalogue_table();
      if (show_ops) {
        std::cout << "\nanalyses:\n";
        for (const auto& op : scenario_ops()) {
          std::cout << "  [" << op << "]";
          for (const auto& s : op_signature(op)) std::cout << ' ' << s;
          std::cout << '\n';
        }
      }
      return 0;
    }
    auto put = [](Direct& d, const char* key, const std::string& v) {
      if (!v.empty()) d.params.push_back(std::string(key) + "=" + v);
    };
    if (*p) {
      put(prox, "horizon", horizon);
      put(prox, "eps", eps);
      put(prox, "n_max", n_max);
      return run_direct(prox, g);
    }
    if (*e) {
      put(equi, "N", eq_n);
      put(equi, "eps", eq_eps);
      put(equi, "deltas", delta_grid);
      return run_direct(equi, g);
    }
    if (*st) {
      if (!audit.empty()) structure.op = audits.at(audit);
      return run_direct(structure, g);
    }
    if (*en) {
      ent.op = method == "partition" ? "metric_entropy_estimate" : method == "words" ? "word_count_entropy" : "ks_bound_audit";
      return run_direct(ent, g);
    }
    if (*ndc) {
      if (!csv.empty()) {
        const auto D = metric == "shift" ? shift_matrix(csv)
                                         : pairwise_matrix(read_rows(csv), metric == "torus" ? LineMetric::torus : LineMetric::euclid);
        std::cout << to_json(diam_n(D, N)).dump(2) << '\n';
        return 0;
      }
      if (nd.system.empty()) throw ScenarioError(0, "ndiam needs --system or --csv");
      nd.op = "diam_n";
      nd.params.push_back("N=" + std::to_string(N));
      return run_direct(nd, g);
    }
  } catch (const ScenarioError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const ParameterError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
