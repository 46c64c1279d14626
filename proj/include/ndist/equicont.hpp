#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ndist/ndiameter.hpp"
#include "ndist/orbit.hpp"
#include "ndist/system.hpp"

namespace ndist {

struct RSetEstimate {
  std::size_t base = 0;
  double delta = 0.0;
  int horizon = 0;
  std::vector<std::size_t> members;
};

RSetEstimate r_set(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H);
RSetEstimate r_set(const OrbitTable& table, std::size_t x, double delta);

// f^n(R_delta(x)) against R_delta(f^n x), the latter traced over the window
// [-H-n, H-n] on the mapped cloud; memberships within 1e-12 of delta are skipped.
bool r_set_equivariance_check(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H,
                              std::int64_t n);

inline const std::vector<double> kDefaultDeltaGrid = {0.2, 0.1, 0.05, 0.02, 0.01};

struct ProbeOptions {
  int spot_checks = 10;
  bool full_time_sweep = false;
  std::uint64_t seed = 0;
  std::uint64_t exact_budget = 20000;
};

enum class DeltaStatus { pass, fail, inconclusive };
std::string to_string(DeltaStatus s);

struct DeltaOutcome {
  double delta = 0.0;
  DeltaStatus status = DeltaStatus::pass;
  double sup_lower = 0.0;  // largest certified lower bound seen
  double sup_upper = 0.0;  // largest upper bound seen (meaningful when status != fail)
  std::size_t bases_checked = 0;
  std::size_t largest_r_set = 0;
};

struct EquicontinuityWitness {
  double delta = 0.0;
  std::size_t base = 0;
  int n = 0;
  std::vector<std::size_t> points;
  double min_distance = 0.0;
  bool certified = false;  // min_distance >= epsilon
};

struct EquicontinuityVerdict {
  int N = 1;
  double epsilon = 0.0;
  int horizon = 0;
  std::vector<double> delta_grid;
  std::vector<int> times;
  std::vector<DeltaOutcome> per_delta;
  bool passed = false;
  std::optional<double> passing_delta;
  std::optional<EquicontinuityWitness> witness;
};

EquicontinuityVerdict n_equicontinuity_probe(const OrbitTable& table, int N, double eps,
                                             const std::vector<double>& delta_grid = kDefaultDeltaGrid,
                                             const ProbeOptions& options = {});
EquicontinuityVerdict n_equicontinuity_probe(const System& sys, const PointCloud& cloud, int N, double eps,
                                             const std::vector<double>& delta_grid, int H,
                                             const ProbeOptions& options = {});

// smallest n >= 1 with n*delta/M mod 1 in [1/4, 3/4]
std::int64_t skew_witness_time(double delta, int M);
// over M in 1..N, the (M, n) with the smallest such n (ties to the smaller M)
std::pair<int, std::int64_t> skew_witness(int N, double delta);
bool skew_witness_condition(std::int64_t n, double delta, int M);

// q = (0,0) and (delta/k, 0) for 1 <= k <= max(N,2), over every delta of the grid
PointCloud skew_witness_cloud(int N, const std::vector<double>& delta_grid);

}  // namespace ndist
