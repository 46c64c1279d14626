#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndist/orbit.hpp"
#include "ndist/proximal.hpp"
#include "ndist/system.hpp"

namespace ndist {

struct PeriodicPoint {
  std::size_t index = 0;
  int period = 0;
};

std::vector<PeriodicPoint> periodic_points(const System& sys, const PointCloud& cloud, int T_max, double eps_per = 1e-6,
                                           int J = 5);

struct ReturnProfile {
  std::size_t index = 0;
  double delta = 0.0;
  int horizon = 0;
  std::vector<std::int64_t> return_times;
  // largest gap between consecutive returns, counting the stretches from -H to the
  // first return and from the last return to H; nullopt when 0 is the only return
  std::optional<std::int64_t> max_gap;
};

ReturnProfile return_profile(const System& sys, const Point& x, double delta, int H);

// gap_bound(delta) = ceil(4 * scale / delta)
struct GapBound {
  double scale = 1.0;
  std::int64_t operator()(double delta) const;
};

// largest distance between two points of the space (analytic, per catalogue system)
double space_diameter(const System& sys);
// ceil(4/delta) rescaled by max(1, space diameter)
GapBound default_gap_bound(const System& sys);

inline const std::vector<double> kDefaultApDeltas = {0.2, 0.1, 0.05};

bool almost_periodic_verdict(const System& sys, const Point& x, const std::vector<double>& deltas, int H,
                             const GapBound& gap_bound);

struct MinimalSetEstimate {
  std::size_t representative = 0;
  std::vector<std::size_t> members;
  // max over members of the distance from the member to the representative's orbit
  double closeness = 0.0;
};

struct MinimalOptions {
  std::vector<double> ap_deltas = kDefaultApDeltas;
  std::optional<GapBound> gap_bound;
};

std::vector<MinimalSetEstimate> minimal_subsystems(const System& sys, const PointCloud& cloud, double delta, int H,
                                                   const MinimalOptions& options = {});

// Named cloud points are tried first, then the rest in index order.
std::optional<std::size_t> transitive_check(const System& sys, const PointCloud& cloud, int H, double delta);

std::vector<std::size_t> dynamical_ball(const System& sys, std::size_t x, double delta, const PointCloud& cloud, int H);

struct ExpansivityRow {
  double delta = 0.0;
  std::size_t max_ball = 0;
  std::size_t argmax = 0;
  // some pair of distinct cloud points lies within delta, so a singleton ball says something
  bool resolved = false;
};

struct ExpansivityVerdict {
  int N = 1;
  int horizon = 0;
  std::vector<ExpansivityRow> rows;
  bool expansive = false;
  bool n_expansive = false;
  std::optional<double> delta;  // first resolved delta achieving the verdict
};

ExpansivityVerdict expansivity_probe(const System& sys, const PointCloud& cloud, const std::vector<double>& delta_grid,
                                     int H, int N);

struct AuditRecord {
  std::string name;
  bool applicable = false;
  bool passed = false;
  nlohmann::ordered_json details;
};

struct StructureParams {
  int proximal_horizon = 200;
  double eps_prox = 1e-3;
  int n_max = 8;
  int horizon = 2000;
  double transitive_delta = 0.05;
  double cluster_delta = 0.05;
  std::vector<double> ap_deltas = kDefaultApDeltas;
  int T_max = 50;
  double eps_per = 1e-6;
  int J = 5;
};

AuditRecord theorem_3_5_audit(const System& sys, int N_claimed, const PointCloud& cloud, const StructureParams& params = {});
AuditRecord prop_3_2_audit(const System& sys, const PointCloud& cloud, const StructureParams& params = {});

}  // namespace ndist
