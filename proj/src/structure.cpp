#include "ndist/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ndist/catalogue.hpp"
#include "ndist/combinators.hpp"
#include "ndist/errors.hpp"
#include "ndist/parallel.hpp"

namespace ndist {

std::vector<PeriodicPoint> periodic_points(const System& sys, const PointCloud& cloud, int T_max, double eps_per, int J) {
  if (T_max < 1) throw ParameterError("T_max must be at least 1");
  if (J < 3) throw ParameterError("J must be at least 3");
  std::vector<int> period(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t i) {
    const Point x = sys.resolve(cloud[i]);
    for (int T = 1; T <= T_max; ++T) {
      bool ok = true;
      for (int j = 1; j <= J && ok; ++j)
        ok = sys.distance(sys.resolve(sys.iterate(cloud[i], static_cast<std::int64_t>(j) * T)), x) < eps_per;
      if (ok) {
        period[i] = T;
        return;
      }
    }
  });
  std::vector<PeriodicPoint> out;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (period[i] > 0) out.push_back({i, period[i]});
  return out;
}

ReturnProfile return_profile(const System& sys, const Point& x, double delta, int H) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  ReturnProfile p;
  p.delta = delta;
  p.horizon = H;
  const Point rx = sys.resolve(x);
  for (int n = -H; n <= H; ++n)
    if (n == 0 || sys.distance(sys.resolve(sys.iterate(x, n)), rx) < delta) p.return_times.push_back(n);
  if (p.return_times.size() > 1) {
    std::int64_t gap = std::max<std::int64_t>(p.return_times.front() + H, H - p.return_times.back());
    for (std::size_t i = 1; i < p.return_times.size(); ++i) gap = std::max(gap, p.return_times[i] - p.return_times[i - 1]);
    p.max_gap = gap;
  }
  return p;
}

std::int64_t GapBound::operator()(double delta) const { return static_cast<std::int64_t>(std::ceil(4.0 * scale / delta)); }

double space_diameter(const System& sys) {
  if (auto a = as_annulus(sys)) return a->has_outer_circle() ? 4.0 : 2.0;
  if (dynamic_cast<const RotationSystem*>(&sys)) return 0.5;
  if (dynamic_cast<const SkewTorusSystem*>(&sys)) return std::sqrt(0.5);
  if (dynamic_cast<const ShiftSystem*>(&sys)) return 1.0;
  if (dynamic_cast<const OnePointSystem*>(&sys)) return 0.0;
  if (auto p = dynamic_cast<const ProductSystem*>(&sys)) return std::max(space_diameter(*p->first()), space_diameter(*p->second()));
  if (auto p = dynamic_cast<const PowerSystem*>(&sys)) return space_diameter(*p->base());
  return 1.0;
}

GapBound default_gap_bound(const System& sys) { return GapBound{std::max(1.0, space_diameter(sys))}; }

bool almost_periodic_verdict(const System& sys, const Point& x, const std::vector<double>& deltas, int H,
                             const GapBound& gap_bound) {
  for (double d : deltas) {
    const auto p = return_profile(sys, x, d, H);
    if (!p.max_gap || *p.max_gap > gap_bound(d)) return false;
  }
  return true;
}

namespace {

// smallest |t| first, so close encounters near time 0 end the scan early
bool orbit_meets(const System& sys, const Point& x, const Point& target_resolved, int H, double delta) {
  for (int s = 0; s <= H; ++s) {
    if (sys.distance(sys.resolve(sys.iterate(x, s)), target_resolved) < delta) return true;
    if (s > 0 && sys.distance(sys.resolve(sys.iterate(x, -s)), target_resolved) < delta) return true;
  }
  return false;
}

double orbit_gap(const System& sys, const Point& x, const Point& target_resolved, int H) {
  double best = std::numeric_limits<double>::infinity();
  for (int t = -H; t <= H; ++t) best = std::min(best, sys.distance(sys.resolve(sys.iterate(x, t)), target_resolved));
  return best;
}

}  // namespace

std::vector<MinimalSetEstimate> minimal_subsystems(const System& sys, const PointCloud& cloud, double delta, int H,
                                                   const MinimalOptions& options) {
  const GapBound bound = options.gap_bound ? *options.gap_bound : default_gap_bound(sys);
  const std::size_t m = cloud.size();
  std::vector<char> ap(m, 0);
  parallel_for(m, [&](std::size_t i) { ap[i] = almost_periodic_verdict(sys, cloud[i], options.ap_deltas, H, bound); });

  std::vector<Point> resolved(m);
  for (std::size_t i = 0; i < m; ++i) resolved[i] = sys.resolve(cloud[i]);

  // union-find over cluster ids, merged toward the smaller id
  std::vector<std::size_t> parent;
  std::vector<std::size_t> rep;  // representative cloud index per cluster id
  std::vector<std::size_t> cluster_of(m, m);
  auto find = [&](std::size_t c) {
    while (parent[c] != c) c = parent[c] = parent[parent[c]];
    return c;
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (!ap[i]) continue;
    std::vector<std::size_t> hits;
    for (std::size_t c = 0; c < rep.size(); ++c) {
      if (find(c) != c) continue;
      const std::size_t r = rep[c];
      if (orbit_meets(sys, cloud[i], resolved[r], H, delta) && orbit_meets(sys, cloud[r], resolved[i], H, delta)) hits.push_back(c);
    }
    if (hits.empty()) {
      parent.push_back(rep.size());
      cluster_of[i] = rep.size();
      rep.push_back(i);
      continue;
    }
    const std::size_t root = hits.front();
    for (std::size_t h : hits) parent[h] = root;
    cluster_of[i] = root;
  }

  std::vector<MinimalSetEstimate> out;
  std::vector<std::size_t> slot(rep.size(), m);
  for (std::size_t i = 0; i < m; ++i) {
    if (cluster_of[i] == m) continue;
    const std::size_t c = find(cluster_of[i]);
    if (slot[c] == m) {
      slot[c] = out.size();
      out.push_back({rep[c], {}, 0.0});
    }
    out[slot[c]].members.push_back(i);
  }
  parallel_for(out.size(), [&](std::size_t k) {
    auto& est = out[k];
    for (std::size_t i : est.members)
      if (i != est.representative) est.closeness = std::max(est.closeness, orbit_gap(sys, cloud[est.representative], resolved[i], H));
  });
  return out;
}

std::optional<std::size_t> transitive_check(const System& sys, const PointCloud& cloud, int H, double delta) {
  std::vector<std::size_t> order;
  for (const auto& [name, i] : cloud.named)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);

  std::vector<Point> resolved(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) resolved[i] = sys.resolve(cloud[i]);
  std::vector<Point> orbit;
  orbit.reserve(static_cast<std::size_t>(2 * H + 1));
  for (std::size_t x : order) {
    orbit.clear();
    for (int s = 0; s <= H; ++s) {
      orbit.push_back(sys.resolve(sys.iterate(cloud[x], s)));
      if (s > 0) orbit.push_back(sys.resolve(sys.iterate(cloud[x], -s)));
    }
    bool dense = true;
    for (std::size_t y = 0; y < cloud.size() && dense; ++y) {
      bool hit = false;
      for (const auto& o : orbit)
        if (sys.distance(o, resolved[y]) < delta) {
          hit = true;
          break;
        }
      dense = hit;
    }
    if (dense) return x;
  }
  return std::nullopt;
}

std::vector<std::size_t> dynamical_ball(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (x >= cloud.size()) throw ParameterError("base index outside the cloud");
  std::vector<Point> ox;
  for (int s = 0; s <= H; ++s) {
    ox.push_back(sys.resolve(sys.iterate(cloud[x], s)));
    if (s > 0) ox.push_back(sys.resolve(sys.iterate(cloud[x], -s)));
  }
  std::vector<char> in(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t j) {
    if (j == x) {
      in[j] = 1;
      return;
    }
    std::size_t k = 0;
    for (int s = 0; s <= H; ++s) {
      if (sys.distance(ox[k++], sys.resolve(sys.iterate(cloud[j], s))) >= delta) return;
      if (s > 0 && sys.distance(ox[k++], sys.resolve(sys.iterate(cloud[j], -s))) >= delta) return;
    }
    in[j] = 1;
  });
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < cloud.size(); ++j)
    if (in[j]) out.push_back(j);
  return out;
}

ExpansivityVerdict expansivity_probe(const System& sys, const PointCloud& cloud, const std::vector<double>& delta_grid,
                                     int H, int N) {
  ExpansivityVerdict v;
  v.N = N;
  v.horizon = H;
  const std::size_t m = cloud.size();
  std::vector<Point> resolved(m);
  for (std::size_t i = 0; i < m; ++i) resolved[i] = sys.resolve(cloud[i]);
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) closest = std::min(closest, sys.distance(resolved[i], resolved[j]));

  // trajectories once, in the order 0, 1, -1, 2, -2, ... so pairs usually separate early
  std::vector<std::vector<Point>> traj(m);
  parallel_for(m, [&](std::size_t i) {
    traj[i].reserve(static_cast<std::size_t>(2 * H + 1));
    for (int s = 0; s <= H; ++s) {
      traj[i].push_back(sys.resolve(sys.iterate(cloud[i], s)));
      if (s > 0) traj[i].push_back(sys.resolve(sys.iterate(cloud[i], -s)));
    }
  });

  for (double d : delta_grid) {
    ExpansivityRow row;
    row.delta = d;
    row.resolved = closest < d;
    // membership is symmetric, so each unordered pair is tested once
    std::vector<std::vector<std::size_t>> later(m);
    parallel_for(m, [&](std::size_t x) {
      for (std::size_t j = x + 1; j < m; ++j) {
        bool inside = true;
        for (std::size_t k = 0; k < traj[x].size() && inside; ++k) inside = sys.distance(traj[x][k], traj[j][k]) < d;
        if (inside) later[x].push_back(j);
      }
    });
    std::vector<std::size_t> sizes(m, 1);
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t j : later[x]) {
        ++sizes[x];
        ++sizes[j];
      }
    for (std::size_t x = 0; x < m; ++x)
      if (sizes[x] > row.max_ball) {
        row.max_ball = sizes[x];
        row.argmax = x;
      }
    if (row.resolved && !v.delta && row.max_ball <= static_cast<std::size_t>(N)) {
      v.delta = d;
      v.n_expansive = true;
      v.expansive = row.max_ball == 1;
    }
    if (row.resolved && row.max_ball == 1) v.expansive = true;
    v.rows.push_back(row);
  }
  return v;
}

AuditRecord theorem_3_5_audit(const System& sys, int N_claimed, const PointCloud& cloud, const StructureParams& params) {
  AuditRecord rec;
  rec.name = "theorem_3_5_audit";
  auto& d = rec.details;
  d["system"] = sys.id();
  d["N_claimed"] = N_claimed;
  d["cloud_size"] = cloud.size();
  d["proximal_horizon"] = params.proximal_horizon;
  d["eps_prox"] = params.eps_prox;
  d["horizon"] = params.horizon;
  d["transitive_delta"] = params.transitive_delta;
  d["cluster_delta"] = params.cluster_delta;

  ProximalParams pp;
  pp.horizon = params.proximal_horizon;
  pp.eps = params.eps_prox;
  pp.n_max = std::max(N_claimed, 1);
  const auto report = distality_report(sys, cloud, pp);
  d["max_cell_size"] = report.max_cell_size;
  d["verdict"] = report.verdict.tag();
  if (report.max_cell_size > static_cast<std::size_t>(N_claimed)) {
    d["reason"] = "proximal cells exceed N_claimed";
    return rec;
  }
  const auto tp = transitive_check(sys, cloud, params.horizon, params.transitive_delta);
  if (!tp) {
    d["reason"] = "no transitive point at this scale";
    return rec;
  }
  d["transitive_point"] = *tp;
  d["transitive_point_repr"] = to_string(cloud[*tp]);
  rec.applicable = true;

  MinimalOptions mo;
  mo.ap_deltas = params.ap_deltas;
  const auto clusters = minimal_subsystems(sys, cloud, params.cluster_delta, params.horizon, mo);
  std::size_t proper = clusters.size();
  if (clusters.size() == 1 && clusters.front().members.size() == cloud.size()) proper = 0;
  nlohmann::ordered_json cl = nlohmann::ordered_json::array();
  for (const auto& c : clusters)
    cl.push_back({{"representative", c.representative}, {"size", c.members.size()}, {"closeness", c.closeness}});
  d["clusters"] = cl;
  d["minimal_clusters"] = clusters.size();
  d["proper_minimal_subsystems"] = proper;
  d["bound"] = N_claimed - 1;
  rec.passed = proper <= static_cast<std::size_t>(std::max(N_claimed - 1, 0));
  return rec;
}

AuditRecord prop_3_2_audit(const System& sys, const PointCloud& cloud, const StructureParams& params) {
  AuditRecord rec;
  rec.name = "prop_3_2_audit";
  auto& d = rec.details;
  d["system"] = sys.id();
  d["cloud_size"] = cloud.size();
  d["proximal_horizon"] = params.proximal_horizon;
  d["eps_prox"] = params.eps_prox;
  d["n_max"] = params.n_max;
  d["T_max"] = params.T_max;
  d["eps_per"] = params.eps_per;
  d["J"] = params.J;

  ProximalParams pp;
  pp.horizon = params.proximal_horizon;
  pp.eps = params.eps_prox;
  pp.n_max = params.n_max;
  const auto report = distality_report(sys, cloud, pp);
  d["max_cell_size"] = report.max_cell_size;
  d["verdict"] = report.verdict.tag();
  // a distal system is N-distal for every N >= 2, so it meets the hypothesis
  rec.applicable = report.verdict.kind != VerdictKind::not_n_distal_up_to;

  const auto periodic = periodic_points(sys, cloud, params.T_max, params.eps_per, params.J);
  d["periodic_points"] = periodic.size();
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const auto& p : periodic) {
    const auto& cell = report.cells[p.index];
    if (cell.size() > 1)
      violations.push_back({{"index", p.index}, {"period", p.period}, {"cell_size", cell.size()}, {"point", to_string(cloud[p.index])}});
  }
  d["violations"] = violations.size();
  if (!violations.empty()) d["violation_list"] = violations;
  if (!rec.applicable) d["reason"] = "proximal cells exceed n_max; recorded only";
  rec.passed = rec.applicable && violations.empty();
  return rec;
}

}  // namespace ndist
