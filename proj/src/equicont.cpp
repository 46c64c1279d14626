#include "ndist/equicont.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ndist/errors.hpp"
#include "ndist/parallel.hpp"

namespace ndist {

std::string to_string(DeltaStatus s) {
  switch (s) {
    case DeltaStatus::pass: return "pass";
    case DeltaStatus::fail: return "fail";
    case DeltaStatus::inconclusive: return "inconclusive";
  }
  return {};
}

RSetEstimate r_set(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (x >= cloud.size()) throw ParameterError("base index outside the cloud");
  RSetEstimate r{x, delta, H, {}};
  std::vector<char> in(cloud.size(), 0);
  parallel_for(cloud.size(), [&](std::size_t j) { in[j] = j == x || min_orbit_distance(sys, cloud[x], cloud[j], H) < delta; });
  for (std::size_t j = 0; j < cloud.size(); ++j)
    if (in[j]) r.members.push_back(j);
  return r;
}

RSetEstimate r_set(const OrbitTable& table, std::size_t x, double delta) {
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (x >= table.size()) throw ParameterError("base index outside the cloud");
  RSetEstimate r{x, delta, table.horizon(), {}};
  const auto& mins = table.min_distance();
  for (std::size_t j = 0; j < table.size(); ++j)
    if (j == x || mins(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j)) < delta) r.members.push_back(j);
  return r;
}

bool r_set_equivariance_check(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H,
                              std::int64_t n) {
  if (2 * std::llabs(n) > H) throw ParameterError("equivariance check needs |n| <= H/2");
  if (x >= cloud.size()) throw ParameterError("base index outside the cloud");
  const std::size_t m = cloud.size();
  const Point fx = sys.iterate(cloud[x], n);
  std::vector<double> before(m), after(m);
  parallel_for(m, [&](std::size_t j) {
    before[j] = min_orbit_distance(sys, cloud[x], cloud[j], H);
    const Point fy = sys.iterate(cloud[j], n);
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t t = -H - n; t <= H - n; ++t)
      best = std::min(best, sys.distance(sys.resolve(sys.iterate(fx, t)), sys.resolve(sys.iterate(fy, t))));
    after[j] = best;
  });
  for (std::size_t j = 0; j < m; ++j) {
    if (j == x) continue;
    if (std::fabs(before[j] - delta) <= 1e-12 || std::fabs(after[j] - delta) <= 1e-12) continue;
    if ((before[j] < delta) != (after[j] < delta)) return false;
  }
  return true;
}

namespace {

std::vector<int> probe_times(int H, const ProbeOptions& o) {
  std::vector<int> t{0};
  if (o.full_time_sweep) {
    for (int n = 1; n <= H; ++n) {
      t.push_back(n);
      t.push_back(-n);
    }
    return t;
  }
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> pick(-H / 2, H / 2);
  for (int i = 0; i < o.spot_checks; ++i) t.push_back(pick(rng));
  // order by |n|, positive first; drop repeats
  std::sort(t.begin(), t.end(), [](int a, int b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a > b;
  });
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace

EquicontinuityVerdict n_equicontinuity_probe(const OrbitTable& table, int N, double eps,
                                             const std::vector<double>& delta_grid, const ProbeOptions& options) {
  if (N < 1) throw ParameterError("N must be positive");
  if (!(eps > 0.0)) throw ParameterError("epsilon must be positive");
  if (table.size() < static_cast<std::size_t>(N) + 1) throw ParameterError("cloud smaller than N+1 points");
  if (!std::is_sorted(delta_grid.rbegin(), delta_grid.rend())) throw ParameterError("delta grid must be sorted descending");

  EquicontinuityVerdict v;
  v.N = N;
  v.epsilon = eps;
  v.horizon = table.horizon();
  v.delta_grid = delta_grid;
  v.times = probe_times(table.horizon(), options);

  for (double delta : delta_grid) {
    DeltaOutcome out;
    out.delta = delta;
    std::optional<EquicontinuityWitness> failing;
    std::optional<EquicontinuityWitness> best_guess;
    bool undecided = false;
    for (std::size_t x = 0; x < table.size() && !failing; ++x) {
      const auto R = r_set(table, x, delta).members;
      out.largest_r_set = std::max(out.largest_r_set, R.size());
      ++out.bases_checked;
      if (R.size() <= static_cast<std::size_t>(N)) continue;
      for (int n : v.times) {
        const Eigen::MatrixXd D = table.snapshot(R, n);
        const auto res = diam_n(D, N, options.exact_budget);
        out.sup_upper = std::max(out.sup_upper, res.value_upper);
        out.sup_lower = std::max(out.sup_lower, res.value_lower);
        EquicontinuityWitness w;
        w.delta = delta;
        w.base = x;
        w.n = n;
        for (std::size_t i : res.witness) w.points.push_back(R[i]);
        w.min_distance = res.value_lower;
        w.certified = res.value_lower >= eps;
        if (!best_guess || w.min_distance > best_guess->min_distance) best_guess = w;
        if (w.certified) {
          failing = std::move(w);
          break;
        }
        if (res.value_upper >= eps) undecided = true;
      }
    }
    if (failing) {
      out.status = DeltaStatus::fail;
    } else if (undecided) {
      out.status = DeltaStatus::inconclusive;
    } else {
      out.status = DeltaStatus::pass;
      if (!v.passed) {
        v.passed = true;
        v.passing_delta = delta;
      }
    }
    v.per_delta.push_back(out);
    if (delta == delta_grid.back() && out.status != DeltaStatus::pass) v.witness = failing ? failing : best_guess;
  }
  return v;
}

EquicontinuityVerdict n_equicontinuity_probe(const System& sys, const PointCloud& cloud, int N, double eps,
                                             const std::vector<double>& delta_grid, int H, const ProbeOptions& options) {
  if (cloud.size() < static_cast<std::size_t>(N) + 1) throw ParameterError("cloud smaller than N+1 points");
  OrbitTable table(sys, cloud, H);
  return n_equicontinuity_probe(table, N, eps, delta_grid, options);
}

bool skew_witness_condition(std::int64_t n, double delta, int M) {
  const double v = wrap_unit(static_cast<double>(n) * delta / M);
  return v >= 0.25 - 1e-12 && v <= 0.75 + 1e-12;
}

std::int64_t skew_witness_time(double delta, int M) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("skew_witness needs 0 < delta < 1");
  if (M < 1) throw ParameterError("M must be positive");
  for (std::int64_t n = 1;; ++n)
    if (skew_witness_condition(n, delta, M)) return n;
}

std::pair<int, std::int64_t> skew_witness(int N, double delta) {
  if (N < 1) throw ParameterError("N must be positive");
  std::pair<int, std::int64_t> best{1, skew_witness_time(delta, 1)};
  for (int M = 2; M <= N; ++M) {
    const auto n = skew_witness_time(delta, M);
    if (n < best.second) best = {M, n};
  }
  return best;
}

PointCloud skew_witness_cloud(int N, const std::vector<double>& delta_grid) {
  PointCloud c;
  c.provenance = Provenance::grid;
  c.system_id = "skew_torus";
  c.add(Torus{0.0, 0.0}, "q");
  const int kmax = std::max(N, 2);
  for (double d : delta_grid)
    for (int k = 1; k <= kmax; ++k) {
      Point p = Torus{d / k, 0.0};
      if (!c.find(p)) c.add(std::move(p));
    }
  return c;
}

}  // namespace ndist
