#include "ndist/scenario.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "ndist/catalogue.hpp"
#include "ndist/errors.hpp"

namespace ndist {

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::optional<double> to_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (auto slash = s.find('/'); slash != std::string::npos) {
    auto p = to_real(s.substr(0, slash));
    auto q = to_real(s.substr(slash + 1));
    if (!p || !q || *q == 0.0) return std::nullopt;
    return *p / *q;
  }
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  return std::nullopt;
}

enum class Type { integer, real, boolean, text, reals, point };

const char* type_name(Type t) {
  switch (t) {
    case Type::integer: return "int";
    case Type::real: return "real";
    case Type::boolean: return "bool";
    case Type::text: return "string";
    case Type::reals: return "real list";
    case Type::point: return "point";
  }
  return "";
}

struct ParamSpec {
  std::string name;
  Type type;
  std::string fallback;  // empty: optional without default
};

const std::map<std::string, std::vector<ParamSpec>>& schema() {
  static const std::map<std::string, std::vector<ParamSpec>> s = {
      {"distality_report",
       {{"horizon", Type::integer, "200"},
        {"eps", Type::real, "1e-3"},
        {"n_max", Type::integer, "3"},
        {"stability", Type::boolean, "false"},
        {"expect_max_cell", Type::integer, ""},
        {"expect_verdict", Type::text, ""}}},
      {"proximal_cell", {{"point", Type::point, "0"}, {"horizon", Type::integer, "200"}, {"eps", Type::real, "1e-3"}}},
      {"cell_growth",
       {{"base", Type::text, "zero"},
        {"resolutions", Type::reals, "3,4,5,6"},
        {"horizon", Type::integer, "200"},
        {"eps", Type::real, "1e-3"},
        {"n_max", Type::integer, "8"},
        {"expect_increasing", Type::boolean, ""}}},
      {"proximal_quotient",
       {{"horizon", Type::integer, "200"},
        {"eps", Type::real, "1e-3"},
        {"n_max", Type::integer, "3"},
        {"expect_equivalence", Type::boolean, ""}}},
      {"diam_n", {{"N", Type::integer, "2"}, {"time", Type::integer, "0"}, {"budget", Type::integer, "2000000"}}},
      {"r_set", {{"point", Type::point, "0"}, {"delta", Type::real, "0.1"}, {"horizon", Type::integer, "200"}}},
      {"n_equicontinuity_probe",
       {{"N", Type::integer, "1"},
        {"eps", Type::real, "0.2"},
        {"deltas", Type::reals, "0.2,0.1,0.05,0.02,0.01"},
        {"horizon", Type::integer, "200"},
        {"spot_checks", Type::integer, "10"},
        {"full_sweep", Type::boolean, "false"},
        {"budget", Type::integer, "20000"},
        {"expect", Type::text, ""}}},
      {"periodic_points",
       {{"T_max", Type::integer, "50"},
        {"eps_per", Type::real, "1e-6"},
        {"J", Type::integer, "5"},
        {"expect_count", Type::integer, ""}}},
      {"return_profile", {{"point", Type::point, "0"}, {"delta", Type::real, "0.1"}, {"horizon", Type::integer, "2000"}}},
      {"almost_periodic",
       {{"point", Type::point, "0"}, {"deltas", Type::reals, "0.2,0.1,0.05"}, {"horizon", Type::integer, "2000"}}},
      {"minimal_subsystems",
       {{"delta", Type::real, "0.05"}, {"horizon", Type::integer, "2000"}, {"ap_deltas", Type::reals, "0.2,0.1,0.05"}}},
      {"transitive_check", {{"horizon", Type::integer, "2000"}, {"delta", Type::real, "0.05"}}},
      {"expansivity_probe",
       {{"deltas", Type::reals, "0.25"},
        {"horizon", Type::integer, "20"},
        {"N", Type::integer, "1"},
        {"expect_expansive", Type::boolean, ""}}},
      {"theorem_3_5_audit",
       {{"N", Type::integer, "3"},
        {"proximal_horizon", Type::integer, "200"},
        {"eps_prox", Type::real, "1e-3"},
        {"horizon", Type::integer, "2000"},
        {"transitive_delta", Type::real, "0.05"},
        {"cluster_delta", Type::real, "0.05"},
        {"ap_deltas", Type::reals, "0.2,0.1,0.05"}}},
      {"prop_3_2_audit",
       {{"proximal_horizon", Type::integer, "200"},
        {"eps_prox", Type::real, "1e-3"},
        {"n_max", Type::integer, "8"},
        {"T_max", Type::integer, "50"},
        {"eps_per", Type::real, "1e-6"},
        {"J", Type::integer, "5"}}},
      {"metric_entropy_estimate",
       {{"partition", Type::text, "arc:2"},
        {"measure", Type::text, "orbit"},
        {"start", Type::point, "0"},
        {"orbit_length", Type::integer, "10000"},
        {"n_max", Type::integer, "12"},
        {"expect_max", Type::real, ""},
        {"expect_value", Type::real, ""},
        {"tol", Type::real, "1e-12"}}},
      {"word_count_entropy",
       {{"n", Type::integer, "12"}, {"expect_value", Type::real, ""}, {"tol", Type::real, "1e-12"}}},
      {"geometric_partition", {{"r", Type::real, "0.3"}, {"center", Type::point, "0"}}},
      {"ks_bound_audit", {{"r_list", Type::reals, "0.3,0.2,0.1,0.05"}, {"center", Type::point, "0"}}},
  };
  return s;
}

bool type_ok(Type t, const std::string& v) {
  switch (t) {
    case Type::integer: return to_int(v).has_value();
    case Type::real: return to_real(v).has_value();
    case Type::boolean: return to_bool(v).has_value();
    case Type::text: return !v.empty();
    case Type::point: return !v.empty();
    case Type::reals:
      for (const auto& part : split(v, ','))
        if (!to_real(part)) return false;
      return true;
  }
  return false;
}

// typed view of one analysis' parameters, defaults filled in
class Args {
 public:
  Args(const Analysis& a) {
    for (const auto& p : schema().at(a.op))
      if (!p.fallback.empty()) values_[p.name] = p.fallback;
    for (const auto& [k, v] : a.params) values_[k] = v;
  }
  bool has(const std::string& k) const { return values_.count(k) > 0; }
  const std::string& text(const std::string& k) const { return values_.at(k); }
  int integer(const std::string& k) const { return static_cast<int>(*to_int(values_.at(k))); }
  std::int64_t big(const std::string& k) const { return *to_int(values_.at(k)); }
  double real(const std::string& k) const { return *to_real(values_.at(k)); }
  bool boolean(const std::string& k) const { return *to_bool(values_.at(k)); }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& part : split(values_.at(k), ',')) out.push_back(*to_real(part));
    return out;
  }
  Json echo() const {
    Json j = Json::object();
    for (const auto& [k, v] : values_) j[k] = v;
    return j;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::size_t point_ref(const PointCloud& c, const std::string& ref) {
  if (auto i = to_int(ref)) {
    if (*i < 0 || static_cast<std::size_t>(*i) >= c.size()) throw ParameterError("point index " + ref + " outside the cloud");
    return static_cast<std::size_t>(*i);
  }
  if (auto i = c.index_of(ref)) return *i;
  throw ParameterError("no cloud point named '" + ref + "'");
}

void check_cloud_spec(const std::string& spec, int line) {
  if (spec == "default") return;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto ints = [&](std::size_t count) {
    const auto parts = split(arg, ',');
    if (parts.size() != count) return false;
    for (const auto& p : parts)
      if (!to_int(p)) return false;
    return true;
  };
  const bool ok = ((kind == "sample" || kind == "random" || kind == "shift_periodic" || kind == "skew_witness" ||
                    kind == "de_bruijn") &&
                   ints(1)) ||
                  (kind == "annulus" && ints(2));
  if (!ok) throw ScenarioError(line, "bad cloud spec '" + spec + "'");
}

Labeler partition_labeler(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "arc") {
    auto k = to_int(arg);
    if (!k) throw ParameterError("arc partition needs a count, e.g. arc:2");
    return arc_labeler(static_cast<int>(*k));
  }
  if (kind == "cylinder") return cylinder_labeler();
  if (kind == "grid") {
    const auto x = arg.find('x');
    auto a = to_int(arg.substr(0, x));
    auto b = x == std::string::npos ? std::nullopt : to_int(arg.substr(x + 1));
    if (!a || !b) throw ParameterError("grid partition needs AxB, e.g. grid:2x2");
    return grid_labeler(static_cast<int>(*a), static_cast<int>(*b));
  }
  throw ParameterError("unknown partition '" + spec + "'");
}

std::string fmt(double v) { return format_real(v); }

struct Outcome {
  Json result;
  std::optional<bool> passed;  // set when the analysis asserts
  std::vector<Table> tables;
};

void expect(Outcome& o, bool ok) { o.passed = o.passed.value_or(true) && ok; }

Outcome run_analysis(const System& sys, const Analysis& a, const PointCloud& cloud, std::uint64_t seed) {
  const Args args(a);
  Outcome o;
  const std::string& op = a.op;

  if (op == "distality_report") {
    ProximalParams p;
    p.horizon = args.integer("horizon");
    p.eps = args.real("eps");
    p.n_max = args.integer("n_max");
    p.stability = args.boolean("stability");
    const auto r = distality_report(sys, cloud, p);
    o.result = to_json(r);
    Table t{"cells", {"base", "size", "members"}, {}};
    for (const auto& c : r.cells) {
      std::string mem;
      for (std::size_t i : c.members) mem += (mem.empty() ? "" : " ") + std::to_string(i);
      t.rows.push_back({std::to_string(c.base), std::to_string(c.size()), mem});
    }
    o.tables.push_back(std::move(t));
    Table edges{"edges", {"a", "b", "min_distance"}, {}};
    for (const auto& c : r.cells)
      for (std::size_t k = 0; k < c.members.size(); ++k)
        if (c.members[k] > c.base) edges.rows.push_back({std::to_string(c.base), std::to_string(c.members[k]), fmt(c.min_dist_trace[k])});
    o.tables.push_back(std::move(edges));
    if (args.has("expect_max_cell")) expect(o, r.max_cell_size == static_cast<std::size_t>(args.integer("expect_max_cell")));
    if (args.has("expect_verdict")) expect(o, r.verdict.tag() == args.text("expect_verdict") || r.verdict.describe() == args.text("expect_verdict"));
  } else if (op == "proximal_cell") {
    const auto c = proximal_cell(sys, point_ref(cloud, args.text("point")), cloud, args.integer("horizon"), args.real("eps"));
    o.result = to_json(c);
  } else if (op == "cell_growth") {
    std::vector<PointCloud> clouds;
    for (double r : args.reals("resolutions")) clouds.push_back(sys.sample(static_cast<int>(r), seed));
    const auto g = cell_growth(sys, clouds, args.text("base"), args.integer("horizon"), args.real("eps"), args.integer("n_max"));
    o.result = to_json(g);
    Table t{"sizes", {"resolution", "cell_size"}, {}};
    const auto res = args.reals("resolutions");
    for (std::size_t k = 0; k < g.sizes.size(); ++k) t.rows.push_back({fmt(res[k]), std::to_string(g.sizes[k])});
    o.tables.push_back(std::move(t));
    if (args.has("expect_increasing")) expect(o, g.strictly_increasing == args.boolean("expect_increasing"));
  } else if (op == "proximal_quotient") {
    ProximalParams p;
    p.horizon = args.integer("horizon");
    p.eps = args.real("eps");
    p.n_max = args.integer("n_max");
    const auto r = distality_report(sys, cloud, p);
    const auto q = proximal_quotient(r, sys, cloud);
    o.result = to_json(q);
    if (args.has("expect_equivalence")) expect(o, q.is_equivalence == args.boolean("expect_equivalence"));
  } else if (op == "diam_n") {
    OrbitTable table(sys, cloud, std::abs(args.integer("time")), false);
    std::vector<std::size_t> all(cloud.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const Eigen::MatrixXd D = table.snapshot(all, args.integer("time"));
    o.result = to_json(diam_n(D, args.integer("N"), static_cast<std::uint64_t>(args.big("budget"))));
  } else if (op == "r_set") {
    o.result = to_json(r_set(sys, point_ref(cloud, args.text("point")), args.real("delta"), cloud, args.integer("horizon")));
  } else if (op == "n_equicontinuity_probe") {
    ProbeOptions po;
    po.spot_checks = args.integer("spot_checks");
    po.full_time_sweep = args.boolean("full_sweep");
    po.seed = seed;
    po.exact_budget = static_cast<std::uint64_t>(args.big("budget"));
    const auto v = n_equicontinuity_probe(sys, cloud, args.integer("N"), args.real("eps"), args.reals("deltas"),
                                          args.integer("horizon"), po);
    o.result = to_json(v);
    Table t{"per_delta", {"delta", "status", "sup_lower", "sup_upper", "bases_checked", "largest_r_set"}, {}};
    for (const auto& d : v.per_delta)
      t.rows.push_back({fmt(d.delta), to_string(d.status), fmt(d.sup_lower), fmt(d.sup_upper), std::to_string(d.bases_checked),
                        std::to_string(d.largest_r_set)});
    o.tables.push_back(std::move(t));
    if (v.witness) {
      Table w{"witness", {"index", "point", "delta", "n"}, {}};
      for (std::size_t i : v.witness->points)
        w.rows.push_back({std::to_string(i), to_string(cloud[i]), fmt(v.witness->delta), std::to_string(v.witness->n)});
      o.tables.push_back(std::move(w));
    }
    if (args.has("expect")) expect(o, (v.passed ? "pass" : "fail") == args.text("expect"));
  } else if (op == "periodic_points") {
    const auto p = periodic_points(sys, cloud, args.integer("T_max"), args.real("eps_per"), args.integer("J"));
    o.result = to_json(p);
    Table t{"periodic", {"index", "period"}, {}};
    for (const auto& q : p) t.rows.push_back({std::to_string(q.index), std::to_string(q.period)});
    o.tables.push_back(std::move(t));
    if (args.has("expect_count")) expect(o, p.size() == static_cast<std::size_t>(args.integer("expect_count")));
  } else if (op == "return_profile") {
    const std::size_t x = point_ref(cloud, args.text("point"));
    auto p = return_profile(sys, cloud[x], args.real("delta"), args.integer("horizon"));
    p.index = x;
    o.result = to_json(p);
    Table t{"returns", {"n"}, {}};
    for (auto n : p.return_times) t.rows.push_back({std::to_string(n)});
    o.tables.push_back(std::move(t));
  } else if (op == "almost_periodic") {
    const std::size_t x = point_ref(cloud, args.text("point"));
    const auto bound = default_gap_bound(sys);
    o.result = Json{{"index", x},
                    {"gap_scale", bound.scale},
                    {"almost_periodic", almost_periodic_verdict(sys, cloud[x], args.reals("deltas"), args.integer("horizon"), bound)}};
  } else if (op == "minimal_subsystems") {
    MinimalOptions mo;
    mo.ap_deltas = args.reals("ap_deltas");
    o.result = to_json(minimal_subsystems(sys, cloud, args.real("delta"), args.integer("horizon"), mo));
  } else if (op == "transitive_check") {
    const auto t = transitive_check(sys, cloud, args.integer("horizon"), args.real("delta"));
    o.result = Json{{"transitive_point", t ? Json(*t) : Json(nullptr)}};
  } else if (op == "expansivity_probe") {
    const auto v = expansivity_probe(sys, cloud, args.reals("deltas"), args.integer("horizon"), args.integer("N"));
    o.result = to_json(v);
    Table t{"rows", {"delta", "max_ball", "argmax", "resolved"}, {}};
    for (const auto& r : v.rows)
      t.rows.push_back({fmt(r.delta), std::to_string(r.max_ball), std::to_string(r.argmax), r.resolved ? "true" : "false"});
    o.tables.push_back(std::move(t));
    if (args.has("expect_expansive")) expect(o, v.expansive == args.boolean("expect_expansive"));
  } else if (op == "theorem_3_5_audit" || op == "prop_3_2_audit") {
    StructureParams sp;
    sp.proximal_horizon = args.integer("proximal_horizon");
    sp.eps_prox = args.real("eps_prox");
    AuditRecord rec;
    if (op == "theorem_3_5_audit") {
      sp.horizon = args.integer("horizon");
      sp.transitive_delta = args.real("transitive_delta");
      sp.cluster_delta = args.real("cluster_delta");
      sp.ap_deltas = args.reals("ap_deltas");
      rec = theorem_3_5_audit(sys, args.integer("N"), cloud, sp);
    } else {
      sp.n_max = args.integer("n_max");
      sp.T_max = args.integer("T_max");
      sp.eps_per = args.real("eps_per");
      sp.J = args.integer("J");
      rec = prop_3_2_audit(sys, cloud, sp);
    }
    o.result = to_json(rec);
    if (rec.applicable) expect(o, rec.passed);
  } else if (op == "metric_entropy_estimate") {
    const Labeler lab = partition_labeler(args.text("partition"));
    const std::string& m = args.text("measure");
    EntropyEstimate e;
    if (m == "orbit") {
      const auto s = orbit_measure(sys, cloud[point_ref(cloud, args.text("start"))], static_cast<std::size_t>(args.big("orbit_length")));
      e = metric_entropy_estimate(sys, make_partition(sys, s.cloud, lab), s.measure, s.cloud, args.integer("n_max"));
    } else if (m == "uniform") {
      e = metric_entropy_estimate(sys, make_partition(sys, cloud, lab), EmpiricalMeasure::uniform(cloud.size()), cloud,
                                  args.integer("n_max"));
    } else {
      throw ParameterError("measure must be orbit or uniform");
    }
    e.params["partition"] = args.text("partition");
    o.result = to_json(e);
    Table t{"per_n", {"n", "entropy_rate", "entropy", "cells"}, {}};
    for (std::size_t k = 0; k < e.per_n.size(); ++k)
      t.rows.push_back({std::to_string(k + 1), fmt(e.per_n[k]), fmt(e.raw[k]), std::to_string(e.cells[k])});
    o.tables.push_back(std::move(t));
    if (args.has("expect_max")) expect(o, e.value <= args.real("expect_max"));
    if (args.has("expect_value")) expect(o, std::fabs(e.value - args.real("expect_value")) <= args.real("tol"));
  } else if (op == "word_count_entropy") {
    const auto e = word_count_entropy(sys, cloud, args.integer("n"));
    o.result = to_json(e);
    Table t{"per_n", {"n", "entropy_rate", "log_words", "words"}, {}};
    for (std::size_t k = 0; k < e.per_n.size(); ++k)
      t.rows.push_back({std::to_string(k + 1), fmt(e.per_n[k]), fmt(e.raw[k]), std::to_string(e.cells[k])});
    o.tables.push_back(std::move(t));
    if (args.has("expect_value")) expect(o, std::fabs(e.value - args.real("expect_value")) <= args.real("tol"));
  } else if (op == "geometric_partition") {
    o.result = to_json(geometric_partition(sys, cloud, EmpiricalMeasure::uniform(cloud.size()), args.real("r"),
                                           point_ref(cloud, args.text("center"))));
  } else if (op == "ks_bound_audit") {
    const auto audit = ks_bound_audit(sys, cloud, EmpiricalMeasure::uniform(cloud.size()), args.reals("r_list"),
                                      point_ref(cloud, args.text("center")));
    o.result = to_json(audit);
    Table t{"rows", {"r", "entropy", "series_bound", "closing_bound", "cells"}, {}};
    for (const auto& r : audit.rows)
      t.rows.push_back({fmt(r.r), fmt(r.entropy), fmt(ks_series_bound()), fmt(r.closing_bound), std::to_string(r.cells)});
    o.tables.push_back(std::move(t));
    expect(o, audit.passed);
  }
  o.result = Json{{"params", args.echo()}, {"value", o.result}};
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string name) {
  Scenario s;
  s.name = std::move(name);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  bool seen_system = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string l = trim(raw);
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ScenarioError(line, "unterminated section header");
      s.analyses.push_back({trim(std::string_view(l).substr(1, l.size() - 2)), {}, line});
      if (s.analyses.back().op.empty()) throw ScenarioError(line, "empty section name");
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ScenarioError(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const std::string value = trim(std::string_view(l).substr(eq + 1));
    if (key.empty()) throw ScenarioError(line, "missing key");
    if (!s.analyses.empty()) {
      auto& params = s.analyses.back().params;
      for (const auto& [k, v] : params)
        if (k == key) throw ScenarioError(line, "duplicate key '" + key + "'");
      params.emplace_back(key, value);
      continue;
    }
    if (key == "system") {
      s.system = value;
      s.system_line = line;
      seen_system = true;
    } else if (key == "seed") {
      auto v = to_int(value);
      if (!v || *v < 0) throw ScenarioError(line, "seed must be a nonnegative integer");
      s.seed = static_cast<std::uint64_t>(*v);
    } else if (key == "cloud") {
      s.cloud = value;
      s.cloud_line = line;
    } else if (key == "output") {
      s.output = value;
    } else {
      throw ScenarioError(line, "unknown global key '" + key + "'");
    }
  }
  if (!seen_system) throw ScenarioError(0, "scenario names no system");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError(0, "cannot read " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str(), path.stem().string());
}

void validate_scenario(const Scenario& s) {
  try {
    make_system(s.system);
  } catch (const Error& e) {
    throw ScenarioError(s.system_line, std::string("system: ") + e.what());
  }
  check_cloud_spec(s.cloud, s.cloud_line);
  if (s.analyses.empty()) throw ScenarioError(0, "scenario has no analyses");
  for (const auto& a : s.analyses) {
    auto it = schema().find(a.op);
    if (it == schema().end()) throw ScenarioError(a.line, "unknown analysis '" + a.op + "'");
    for (const auto& [k, v] : a.params) {
      if (k == "cloud") {
        check_cloud_spec(v, a.line);
        continue;
      }
      auto spec = std::find_if(it->second.begin(), it->second.end(), [&](const ParamSpec& p) { return p.name == k; });
      if (spec == it->second.end()) throw ScenarioError(a.line, a.op + ": unknown parameter '" + k + "'");
      if (!type_ok(spec->type, v)) throw ScenarioError(a.line, a.op + ": parameter '" + k + "' is not a " + type_name(spec->type));
    }
  }
}

std::vector<std::string> scenario_ops() {
  std::vector<std::string> out;
  for (const auto& [k, v] : schema()) out.push_back(k);
  return out;
}

std::vector<std::string> op_signature(const std::string& op) {
  std::vector<std::string> out;
  auto it = schema().find(op);
  if (it == schema().end()) throw ParameterError("unknown analysis '" + op + "'");
  for (const auto& p : it->second)
    out.push_back(p.name + ":" + type_name(p.type) + (p.fallback.empty() ? "" : "=" + p.fallback));
  return out;
}

PointCloud build_cloud(const System& sys, const std::string& spec, std::uint64_t seed) {
  check_cloud_spec(spec, 0);
  if (spec == "default") {
    PointCloud c = sys.sample(sys.default_resolution(), seed);
    return c;
  }
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const auto parts = split(spec.substr(colon + 1), ',');
  const int a = static_cast<int>(*to_int(parts[0]));
  if (kind == "sample") return sys.sample(a, seed);
  if (kind == "random") {
    if (a < 1) throw ParameterError("random cloud needs a positive count");
    return random_cloud(sys, static_cast<std::size_t>(a), seed);
  }
  if (kind == "annulus") {
    auto an = as_annulus(sys);
    if (!an) throw ParameterError("annulus cloud on a non-annulus system");
    return an->cloud(a, static_cast<int>(*to_int(parts[1])));
  }
  if (kind == "shift_periodic") return shift_periodic_cloud(a);
  if (kind == "de_bruijn") {
    if (!sys.id().starts_with("shift")) throw ParameterError("de Bruijn cloud needs a shift system");
    PointCloud c;
    c.add(de_bruijn_point(a), "de_bruijn");
    return c;
  }
  return skew_witness_cloud(a, kDefaultDeltaGrid);
}

AuditReport run_scenario(const Scenario& s) {
  validate_scenario(s);
  const SystemPtr sys = make_system(s.system);
  AuditReport out;
  Json analyses = Json::array();
  for (const auto& a : s.analyses) {
    Json p = Json::object();
    for (const auto& [k, v] : a.params) p[k] = v;
    analyses.push_back({{"op", a.op}, {"params", p}});
  }
  out.report["scenario"] = {{"name", s.name}, {"system", sys->id()}, {"seed", s.seed}, {"cloud", s.cloud}, {"analyses", analyses}};

  std::map<std::string, PointCloud> clouds;
  Json results = Json::array();
  std::size_t asserting = 0, failed = 0, errors = 0;
  for (std::size_t k = 0; k < s.analyses.size(); ++k) {
    const auto& a = s.analyses[k];
    std::string spec = s.cloud;
    for (const auto& [key, v] : a.params)
      if (key == "cloud") spec = v;
    Json entry;
    entry["index"] = k;
    entry["op"] = a.op;
    entry["cloud"] = spec;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      auto it = clouds.find(spec);
      if (it == clouds.end()) it = clouds.emplace(spec, build_cloud(*sys, spec, s.seed)).first;
      Analysis stripped = a;
      std::erase_if(stripped.params, [](const auto& kv) { return kv.first == "cloud"; });
      auto o = run_analysis(*sys, stripped, it->second, s.seed);
      entry["status"] = "ok";
      entry["cloud_size"] = it->second.size();
      entry["asserts"] = o.passed.has_value();
      entry["passed"] = o.passed ? Json(*o.passed) : Json(nullptr);
      entry["result"] = o.result;
      if (o.passed) {
        ++asserting;
        if (!*o.passed) ++failed;
      }
      for (auto& t : o.tables) out.tables.emplace_back(k, std::move(t));
    } catch (const std::exception& e) {
      ++errors;
      entry["status"] = "error";
      entry["asserts"] = true;
      entry["passed"] = false;
      entry["error"] = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.timings.emplace_back(a.op, secs);
    results.push_back(entry);
  }
  out.passed = failed == 0 && errors == 0;
  out.report["results"] = results;
  out.report["summary"] = {{"analyses", s.analyses.size()},
                           {"asserting", asserting},
                           {"failed", failed},
                           {"errors", errors},
                           {"pass", out.passed}};
  return out;
}

void write_report(const AuditReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "report.json", std::ios::binary);
    f << r.report.dump(2) << '\n';
  }
  for (const auto& [k, t] : r.tables) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02zu_", k);
    const std::string op = r.report["results"][k]["op"].get<std::string>();
    std::ofstream f(dir / (prefix + op + "_" + t.name + ".csv"), std::ios::binary);
    for (std::size_t i = 0; i < t.header.size(); ++i) f << (i ? "," : "") << csv_field(t.header[i]);
    f << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << csv_field(row[i]);
      f << '\n';
    }
  }
  Json timings = Json::array();
  for (const auto& [op, secs] : r.timings) timings.push_back({{"op", op}, {"seconds", secs}});
  std::ofstream f(dir / "timings.json", std::ios::binary);
  f << timings.dump(2) << '\n';
}

std::string catalogue_table() {
  std::ostringstream out;
  out << "id | distality | omega in AP | minimal sets\n";
  for (const auto& sys : catalogue()) {
    const auto f = sys->facts();
    out << sys->id() << " | " << f.distality << " | " << (f.omega_in_ap ? "yes" : "no") << " | " << f.minimal_sets << '\n';
  }
  return out.str();
}

}  // namespace ndist
