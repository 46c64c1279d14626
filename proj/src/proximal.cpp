#include "ndist/proximal.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "ndist/errors.hpp"
#include "ndist/parallel.hpp"

namespace ndist {

std::size_t ProximalCellEstimate::stable_size() const {
  if (stable.empty()) return members.size();
  return static_cast<std::size_t>(std::count(stable.begin(), stable.end(), 1));
}

bool ProximalCellEstimate::contains(std::size_t i) const { return std::binary_search(members.begin(), members.end(), i); }

std::string DistalityVerdict::describe() const {
  switch (kind) {
    case VerdictKind::distal: return "distal";
    case VerdictKind::n_distal:
      return std::to_string(n) + "-distal, not " + std::to_string(n - 1) + "-distal";
    case VerdictKind::not_n_distal_up_to: return "not N-distal for any N <= " + std::to_string(n);
  }
  return {};
}

std::string DistalityVerdict::tag() const {
  switch (kind) {
    case VerdictKind::distal: return "distal";
    case VerdictKind::n_distal: return "N_distal(" + std::to_string(n) + ")";
    case VerdictKind::not_n_distal_up_to: return "not_N_distal_up_to(" + std::to_string(n) + ")";
  }
  return {};
}

DistalityVerdict verdict_for(std::size_t max_cell_size, int n_max) {
  if (max_cell_size <= 1) return {VerdictKind::distal, 1};
  if (max_cell_size <= static_cast<std::size_t>(n_max)) return {VerdictKind::n_distal, static_cast<int>(max_cell_size)};
  return {VerdictKind::not_n_distal_up_to, n_max};
}

ProximalCellEstimate proximal_cell(const System& sys, std::size_t x, const PointCloud& cloud, int H, double eps) {
  if (x >= cloud.size()) throw ParameterError("base index outside the cloud");
  std::vector<double> trace(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t j) { trace[j] = j == x ? 0.0 : min_orbit_distance(sys, cloud[x], cloud[j], H); });
  ProximalCellEstimate c;
  c.base = x;
  c.horizon = H;
  c.threshold = eps;
  for (std::size_t j = 0; j < cloud.size(); ++j)
    if (trace[j] < eps) {
      c.members.push_back(j);
      c.min_dist_trace.push_back(trace[j]);
    }
  return c;
}

namespace {

bool edge_stable(double at_h, double at_2h) { return at_2h <= kNumericalFloor || at_2h <= at_h / 10.0; }

void finish_report(ProximalReport& r) {
  r.max_cell_size = 0;
  r.max_stable_cell_size = 0;
  r.graph.assign(r.cloud_size, {});
  for (const auto& c : r.cells) {
    r.max_cell_size = std::max(r.max_cell_size, c.size());
    r.max_stable_cell_size = std::max(r.max_stable_cell_size, c.stable_size());
    for (std::size_t j : c.members)
      if (j != c.base) r.graph[c.base].push_back(j);
  }
  r.verdict = verdict_for(r.max_cell_size, r.n_max);
}

}  // namespace

ProximalReport distality_report(const OrbitTable& table, const ProximalParams& params) {
  if (!table.has_pairwise()) throw ParameterError("orbit table was built without pairwise distances");
  const auto& mins = table.min_distance();
  const std::size_t m = table.size();
  ProximalReport r;
  r.system_id = table.system().id();
  r.horizon = table.horizon();
  r.eps = params.eps;
  r.n_max = params.n_max;
  r.cloud_size = m;
  r.stability_checked = params.stability;
  r.cells.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto& c = r.cells[i];
    c.base = i;
    c.horizon = table.horizon();
    c.threshold = params.eps;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = i == j ? 0.0 : mins(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (d < params.eps) {
        c.members.push_back(j);
        c.min_dist_trace.push_back(d);
      }
    }
  }
  if (params.stability) {
    const System& sys = table.system();
    const PointCloud& cloud = table.cloud();
    // trace each unordered edge once at 2H
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& c : r.cells)
      for (std::size_t j : c.members)
        if (j > c.base) edges.emplace_back(c.base, j);
    std::vector<double> longer(edges.size());
    parallel_for(edges.size(), [&](std::size_t e) {
      longer[e] = min_orbit_distance(sys, cloud[edges[e].first], cloud[edges[e].second], 2 * table.horizon());
    });
    for (auto& c : r.cells) {
      c.stable.assign(c.members.size(), 1);
      for (std::size_t k = 0; k < c.members.size(); ++k) {
        const std::size_t j = c.members[k];
        if (j == c.base) continue;
        const auto key = std::make_pair(std::min(c.base, j), std::max(c.base, j));
        const auto it = std::lower_bound(edges.begin(), edges.end(), key);
        c.stable[k] = edge_stable(c.min_dist_trace[k], longer[static_cast<std::size_t>(it - edges.begin())]) ? 1 : 0;
      }
    }
  }
  finish_report(r);
  return r;
}

ProximalReport distality_report(const System& sys, const PointCloud& cloud, const ProximalParams& params) {
  OrbitTable table(sys, cloud, params.horizon);
  return distality_report(table, params);
}

CellGrowth cell_growth(const System& sys, const std::vector<PointCloud>& clouds, const std::string& base_name, int H,
                       double eps, int n_max) {
  CellGrowth g;
  g.n_max = n_max;
  for (const auto& cloud : clouds) {
    auto base = cloud.index_of(base_name);
    if (!base) throw ParameterError("cloud has no point named '" + base_name + "'");
    g.sizes.push_back(proximal_cell(sys, *base, cloud, H, eps).size());
  }
  g.strictly_increasing = g.sizes.size() >= 2;
  for (std::size_t i = 1; i < g.sizes.size(); ++i)
    if (g.sizes[i] <= g.sizes[i - 1]) g.strictly_increasing = false;
  g.not_n_distal_up_to = g.strictly_increasing && !g.sizes.empty() && g.sizes.back() > static_cast<std::size_t>(n_max);
  return g;
}

double hausdorff(const System& sys, const std::vector<Point>& a, const std::vector<Point>& b) {
  auto directed = [&](const std::vector<Point>& u, const std::vector<Point>& v) {
    double worst = 0.0;
    for (const auto& p : u) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : v) best = std::min(best, sys.distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

QuotientResult proximal_quotient(const ProximalReport& report, const System& sys, const PointCloud& cloud) {
  if (report.cloud_size != cloud.size()) throw ParameterError("report and cloud sizes differ");
  QuotientResult q;
  const auto& g = report.graph;
  const std::size_t m = cloud.size();
  auto linked = [&](std::size_t a, std::size_t b) {
    return a == b || std::binary_search(g[a].begin(), g[a].end(), b);
  };
  for (std::size_t b = 0; b < m && !q.violating_triple; ++b) {
    const auto& nb = g[b];
    for (std::size_t x = 0; x < nb.size() && !q.violating_triple; ++x)
      for (std::size_t y = x + 1; y < nb.size(); ++y)
        if (!linked(nb[x], nb[y])) {
          q.violating_triple = std::array<std::size_t, 3>{nb[x], b, nb[y]};
          break;
        }
  }
  q.is_equivalence = !q.violating_triple.has_value();
  if (!q.is_equivalence) return q;

  q.class_of.assign(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (q.class_of[i] != m) continue;
    std::vector<std::size_t> cls{i};
    for (std::size_t j : g[i]) cls.push_back(j);
    std::sort(cls.begin(), cls.end());
    for (std::size_t j : cls) q.class_of[j] = q.classes.size();
    q.classes.push_back(std::move(cls));
  }

  // induced map: class of f(x), looked up in the cloud to 1e-9
  std::vector<Point> resolved(m);
  for (std::size_t i = 0; i < m; ++i) resolved[i] = sys.resolve(cloud[i]);
  auto lookup = [&](const Point& y) -> std::optional<std::size_t> {
    const Point r = sys.resolve(y);
    for (std::size_t i = 0; i < m; ++i)
      if (sys.distance(r, resolved[i]) <= 1e-9) return i;
    return std::nullopt;
  };
  q.image.resize(q.classes.size());
  for (std::size_t c = 0; c < q.classes.size(); ++c) {
    std::optional<std::size_t> target;
    for (std::size_t x : q.classes[c]) {
      auto hit = lookup(sys.step(cloud[x]));
      if (!hit) continue;
      const std::size_t cls = q.class_of[*hit];
      if (!target) {
        target = cls;
      } else {
        ++q.image_checks;
        if (cls != *target) ++q.image_violations;
      }
    }
    q.image[c] = target;
  }

  // distality of the factor: classes compared by Hausdorff distance along the window
  const int H = report.horizon;
  const std::size_t k = q.classes.size();
  std::vector<std::vector<std::vector<Point>>> traj(k);
  parallel_for(k, [&](std::size_t c) {
    traj[c].resize(static_cast<std::size_t>(2 * H + 1));
    for (int n = -H; n <= H; ++n)
      for (std::size_t x : q.classes[c]) traj[c][static_cast<std::size_t>(n + H)].push_back(sys.resolve(sys.iterate(cloud[x], n)));
  });
  Eigen::MatrixXd mins = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  parallel_for(k, [&](std::size_t a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < traj[a].size(); ++t) lo = std::min(lo, hausdorff(sys, traj[a][t], traj[b][t]));
      mins(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = lo;
      mins(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = lo;
    }
  });
  ProximalReport f;
  f.system_id = "quotient(" + report.system_id + ")";
  f.horizon = H;
  f.eps = report.eps;
  f.n_max = report.n_max;
  f.cloud_size = k;
  f.cells.resize(k);
  for (std::size_t a = 0; a < k; ++a) {
    auto& c = f.cells[a];
    c.base = a;
    c.horizon = H;
    c.threshold = report.eps;
    for (std::size_t b = 0; b < k; ++b) {
      const double d = a == b ? 0.0 : mins(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (d < report.eps) {
        c.members.push_back(b);
        c.min_dist_trace.push_back(d);
      }
    }
  }
  finish_report(f);
  q.factor = std::move(f);
  return q;
}

void check_semiconjugacy(const System& g, const System& f, const PointMap& pi, const PointCloud& cloud) {
  for (const auto& z : cloud.points) {
    const double d = f.distance(f.resolve(f.step(pi(z))), f.resolve(pi(g.step(z))));
    if (!(d <= 1e-9)) throw HomomorphismError("pi does not semiconjugate at " + to_string(z));
  }
}

double fiber_mesh(const System& f, const PointMap& pi, const PointCloud& cloud) {
  std::vector<Point> images;
  for (const auto& z : cloud.points) {
    Point y = f.resolve(pi(z));
    if (std::find(images.begin(), images.end(), y) == images.end()) images.push_back(std::move(y));
  }
  double mesh = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double d = f.distance(images[i], images[j]);
      if (d > 0.0) mesh = std::min(mesh, d);
    }
  return mesh;
}

std::vector<ProximalCellEstimate> fiber_cells(const System& g, const System& f, const PointMap& pi,
                                              const PointCloud& cloud, int H, double eps_prox,
                                              std::optional<double> eps_fiber) {
  check_semiconjugacy(g, f, pi, cloud);
  const double ef = eps_fiber ? *eps_fiber : fiber_mesh(f, pi, cloud);
  const std::size_t m = cloud.size();
  std::vector<Point> base(m);
  for (std::size_t i = 0; i < m; ++i) base[i] = f.resolve(pi(cloud[i]));
  std::vector<ProximalCellEstimate> out(m);
  parallel_for(m, [&](std::size_t y) {
    auto& c = out[y];
    c.base = y;
    c.horizon = H;
    c.threshold = eps_prox;
    for (std::size_t z = 0; z < m; ++z) {
      if (z != y && !(f.distance(base[y], base[z]) < ef)) continue;
      const double d = z == y ? 0.0 : min_orbit_distance(g, cloud[y], cloud[z], H);
      if (d < eps_prox) {
        c.members.push_back(z);
        c.min_dist_trace.push_back(d);
      }
    }
  });
  return out;
}

ProximalCellEstimate fiber_proximal_cell(const System& g, const System& f, const PointMap& pi, std::size_t y,
                                         const PointCloud& cloud, int H, double eps_prox,
                                         std::optional<double> eps_fiber) {
  if (y >= cloud.size()) throw ParameterError("base index outside the cloud");
  check_semiconjugacy(g, f, pi, cloud);
  const double ef = eps_fiber ? *eps_fiber : fiber_mesh(f, pi, cloud);
  ProximalCellEstimate c;
  c.base = y;
  c.horizon = H;
  c.threshold = eps_prox;
  const Point by = f.resolve(pi(cloud[y]));
  for (std::size_t z = 0; z < cloud.size(); ++z) {
    if (z != y && !(f.distance(by, f.resolve(pi(cloud[z]))) < ef)) continue;
    const double d = z == y ? 0.0 : min_orbit_distance(g, cloud[y], cloud[z], H);
    if (d < eps_prox) {
      c.members.push_back(z);
      c.min_dist_trace.push_back(d);
    }
  }
  return c;
}

}  // namespace ndist
