#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ndist/orbit.hpp"
#include "ndist/system.hpp"

namespace ndist {

// below this a traced minimum counts as converged regardless of the 10x rule
inline constexpr double kNumericalFloor = 1e-12;

struct ProximalParams {
  int horizon = 200;
  double eps = 1e-3;
  int n_max = 3;
  // re-trace every edge at 2H and flag it stable if the minimum shrank 10x
  bool stability = false;
};

struct ProximalCellEstimate {
  std::size_t base = 0;
  std::vector<std::size_t> members;     // sorted, contains base
  std::vector<double> min_dist_trace;   // parallel to members
  std::vector<char> stable;             // parallel to members, empty if not probed
  int horizon = 0;
  double threshold = 0.0;

  std::size_t size() const { return members.size(); }
  std::size_t stable_size() const;
  bool contains(std::size_t i) const;
};

enum class VerdictKind { distal, n_distal, not_n_distal_up_to };

struct DistalityVerdict {
  VerdictKind kind = VerdictKind::distal;
  int n = 1;
  std::string describe() const;
  std::string tag() const;
};

DistalityVerdict verdict_for(std::size_t max_cell_size, int n_max);

struct ProximalReport {
  std::string system_id;
  int horizon = 0;
  double eps = 0.0;
  int n_max = 0;
  std::size_t cloud_size = 0;
  bool stability_checked = false;
  std::vector<ProximalCellEstimate> cells;
  std::size_t max_cell_size = 0;
  std::size_t max_stable_cell_size = 0;
  DistalityVerdict verdict;
  std::vector<std::vector<std::size_t>> graph;
};

ProximalCellEstimate proximal_cell(const System& sys, std::size_t x, const PointCloud& cloud, int H, double eps);

ProximalReport distality_report(const System& sys, const PointCloud& cloud, const ProximalParams& params = {});
ProximalReport distality_report(const OrbitTable& table, const ProximalParams& params);

// Size of the proximal cell of the named point on each cloud of an increasing family.
struct CellGrowth {
  std::vector<std::size_t> sizes;
  bool strictly_increasing = false;
  int n_max = 0;
  // set when the cell outgrows n_max while still growing
  bool not_n_distal_up_to = false;
};

CellGrowth cell_growth(const System& sys, const std::vector<PointCloud>& clouds, const std::string& base_name,
                       int H, double eps, int n_max);

struct QuotientResult {
  bool is_equivalence = false;
  std::optional<std::array<std::size_t, 3>> violating_triple;  // a~b, b~c, a!~c; b is the middle
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  // class of f(representative); nullopt when f(representative) leaves the cloud
  std::vector<std::optional<std::size_t>> image;
  std::size_t image_checks = 0;
  std::size_t image_violations = 0;
  std::optional<ProximalReport> factor;
};

QuotientResult proximal_quotient(const ProximalReport& report, const System& sys, const PointCloud& cloud);

// Hausdorff distance between finite sets of resolved points
double hausdorff(const System& sys, const std::vector<Point>& a, const std::vector<Point>& b);

// throws HomomorphismError unless dist(f(pi z), pi(g z)) <= 1e-9 on the whole cloud
void check_semiconjugacy(const System& g, const System& f, const PointMap& pi, const PointCloud& cloud);

// minimal positive distance among the pi-images of the cloud
double fiber_mesh(const System& f, const PointMap& pi, const PointCloud& cloud);

ProximalCellEstimate fiber_proximal_cell(const System& g, const System& f, const PointMap& pi, std::size_t y,
                                         const PointCloud& cloud, int H, double eps_prox,
                                         std::optional<double> eps_fiber = std::nullopt);

// fiber cells of every cloud point (one semiconjugacy check, one mesh computation)
std::vector<ProximalCellEstimate> fiber_cells(const System& g, const System& f, const PointMap& pi,
                                              const PointCloud& cloud, int H, double eps_prox,
                                              std::optional<double> eps_fiber = std::nullopt);

}  // namespace ndist
