#include "ndist/report_json.hpp"

#include <cmath>

namespace ndist {

Json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

namespace {

Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

}  // namespace

Json to_json(const PointCloud& c) {
  Json j;
  j["system"] = c.system_id;
  j["size"] = c.size();
  j["provenance"] = to_string(c.provenance);
  j["seed"] = c.seed;
  Json named = Json::object();
  for (const auto& [name, i] : c.named) named[name] = i;
  j["named"] = named;
  return j;
}

Json to_json(const ProximalCellEstimate& c) {
  Json j;
  j["base"] = c.base;
  j["size"] = c.size();
  j["members"] = c.members;
  j["min_dist_trace"] = reals(c.min_dist_trace);
  if (!c.stable.empty()) {
    Json s = Json::array();
    for (char v : c.stable) s.push_back(v != 0);
    j["stable"] = s;
    j["stable_size"] = c.stable_size();
  }
  j["horizon"] = c.horizon;
  j["threshold"] = real(c.threshold);
  return j;
}

Json to_json(const ProximalReport& r) {
  Json j;
  j["system"] = r.system_id;
  j["horizon"] = r.horizon;
  j["eps"] = real(r.eps);
  j["n_max"] = r.n_max;
  j["cloud_size"] = r.cloud_size;
  j["stability_checked"] = r.stability_checked;
  j["max_cell_size"] = r.max_cell_size;
  if (r.stability_checked) j["max_stable_cell_size"] = r.max_stable_cell_size;
  j["verdict"] = r.verdict.describe();
  j["verdict_tag"] = r.verdict.tag();
  std::size_t singletons = 0;
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    if (c.size() <= 1) {
      ++singletons;
      continue;
    }
    cells.push_back(to_json(c));
  }
  j["singleton_cells"] = singletons;
  j["cells"] = cells;
  return j;
}

Json to_json(const CellGrowth& g) {
  return Json{{"sizes", g.sizes},
              {"strictly_increasing", g.strictly_increasing},
              {"n_max", g.n_max},
              {"not_n_distal_up_to", g.not_n_distal_up_to}};
}

Json to_json(const QuotientResult& q) {
  Json j;
  j["is_equivalence"] = q.is_equivalence;
  if (q.violating_triple) j["violating_triple"] = *q.violating_triple;
  else j["violating_triple"] = nullptr;
  j["class_count"] = q.classes.size();
  std::size_t largest = 0;
  for (const auto& c : q.classes) largest = std::max(largest, c.size());
  j["largest_class"] = largest;
  Json cl = Json::array();
  for (const auto& c : q.classes)
    if (c.size() > 1) cl.push_back(c);
  j["nontrivial_classes"] = cl;
  j["image_checks"] = q.image_checks;
  j["image_violations"] = q.image_violations;
  if (q.factor) j["factor"] = to_json(*q.factor);
  else j["factor"] = nullptr;
  return j;
}

Json to_json(const NDiameter& d) {
  return Json{{"value_lower", real(d.value_lower)},
              {"value_upper", real(d.value_upper)},
              {"witness", d.witness},
              {"exact", d.exact}};
}

Json to_json(const RSetEstimate& r) {
  return Json{{"base", r.base}, {"delta", real(r.delta)}, {"horizon", r.horizon}, {"size", r.members.size()}, {"members", r.members}};
}

Json to_json(const EquicontinuityVerdict& v) {
  Json j;
  j["N"] = v.N;
  j["epsilon"] = real(v.epsilon);
  j["horizon"] = v.horizon;
  j["delta_grid"] = reals(v.delta_grid);
  j["times"] = v.times;
  Json rows = Json::array();
  for (const auto& d : v.per_delta)
    rows.push_back({{"delta", real(d.delta)},
                    {"status", to_string(d.status)},
                    {"sup_lower", real(d.sup_lower)},
                    {"sup_upper", real(d.sup_upper)},
                    {"bases_checked", d.bases_checked},
                    {"largest_r_set", d.largest_r_set}});
  j["per_delta"] = rows;
  j["passed"] = v.passed;
  j["passing_delta"] = v.passing_delta ? real(*v.passing_delta) : Json(nullptr);
  if (v.witness)
    j["witness"] = {{"delta", real(v.witness->delta)},
                    {"base", v.witness->base},
                    {"n", v.witness->n},
                    {"points", v.witness->points},
                    {"min_distance", real(v.witness->min_distance)},
                    {"certified", v.witness->certified}};
  else
    j["witness"] = nullptr;
  return j;
}

Json to_json(const ReturnProfile& p) {
  Json j;
  j["index"] = p.index;
  j["delta"] = real(p.delta);
  j["horizon"] = p.horizon;
  j["returns"] = p.return_times.size();
  j["max_gap"] = p.max_gap ? Json(*p.max_gap) : Json(nullptr);
  return j;
}

Json to_json(const std::vector<PeriodicPoint>& p) {
  Json a = Json::array();
  for (const auto& q : p) a.push_back({{"index", q.index}, {"period", q.period}});
  return Json{{"count", p.size()}, {"points", a}};
}

Json to_json(const std::vector<MinimalSetEstimate>& m) {
  Json a = Json::array();
  for (const auto& e : m)
    a.push_back({{"representative", e.representative}, {"size", e.members.size()}, {"members", e.members}, {"closeness", real(e.closeness)}});
  return Json{{"clusters", m.size()}, {"sets", a}};
}

Json to_json(const ExpansivityVerdict& v) {
  Json rows = Json::array();
  for (const auto& r : v.rows)
    rows.push_back({{"delta", real(r.delta)}, {"max_ball", r.max_ball}, {"argmax", r.argmax}, {"resolved", r.resolved}});
  return Json{{"N", v.N},
              {"horizon", v.horizon},
              {"expansive", v.expansive},
              {"n_expansive", v.n_expansive},
              {"delta", v.delta ? real(*v.delta) : Json(nullptr)},
              {"rows", rows}};
}

Json to_json(const AuditRecord& a) {
  return Json{{"name", a.name}, {"applicable", a.applicable}, {"passed", a.passed}, {"details", a.details}};
}

Json to_json(const EntropyEstimate& e) {
  return Json{{"value", real(e.value)},
              {"method", to_string(e.method)},
              {"params", e.params},
              {"monotone", e.monotone},
              {"per_n", reals(e.per_n)},
              {"raw", reals(e.raw)},
              {"cells", e.cells}};
}

Json to_json(const GeometricPartition& g) {
  return Json{{"cells", g.partition.size()},
              {"entropy", real(g.entropy)},
              {"radii", reals(g.radii)},
              {"shell_mass", reals(g.shell_mass)},
              {"cell_mass", reals(g.cell_mass)}};
}

Json to_json(const KsAudit& a) {
  Json rows = Json::array();
  for (const auto& r : a.rows) {
    Json row{{"r", real(r.r)},
             {"constructed", r.constructed},
             {"entropy", real(r.entropy)},
             {"series_bound", real(ks_series_bound())},
             {"closing_bound", real(r.closing_bound)},
             {"cells", r.cells},
             {"within_series_bound", r.within_series_bound},
             {"within_closing_bound", r.within_closing_bound},
             {"chain_ok", r.chain_ok}};
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(row);
  }
  return Json{{"rows", rows},
              {"closing_decreasing", a.closing_decreasing},
              {"closing_at_tiny_r", real(a.closing_at_tiny_r)},
              {"passed", a.passed}};
}

}  // namespace ndist
