#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ndist/system.hpp"

namespace ndist {

// Maps a resolved point to its cell label.
using Labeler = std::function<int(const Point&)>;

struct Partition {
  std::vector<std::vector<std::size_t>> cells;
  std::vector<std::string> labels;
  std::vector<std::size_t> cell_of;  // per cloud index
  Labeler labeler;                   // empty: refinement snaps to the cloud
  double mesh = 0.0;                 // snapping scale (0: computed on demand)
  double max_snap = 0.0;             // largest snapping distance used by refinement

  std::size_t size() const { return cells.size(); }
  // disjoint, covering, no empty cells
  bool well_formed(std::size_t cloud_size) const;
};

Partition make_partition(const System& sys, const PointCloud& cloud, Labeler labeler);
Partition partition_from_cells(std::vector<std::vector<std::size_t>> cells, std::size_t cloud_size);

// floor(k * angle) for Circle / Annulus points
Labeler arc_labeler(int k);
// the symbol at index 0
Labeler cylinder_labeler();
// a x b grid cells for Torus points
Labeler grid_labeler(int a, int b);

enum class MeasureGenerator { orbit, uniform, supplied };
std::string to_string(MeasureGenerator g);

struct EmpiricalMeasure {
  std::vector<double> weights;
  MeasureGenerator generator = MeasureGenerator::uniform;
  std::size_t orbit_length = 0;

  static EmpiricalMeasure uniform(std::size_t m);
  // throws MeasureError on negative weights or a sum off 1 by more than 1e-9
  static EmpiricalMeasure supplied(std::vector<double> weights);
};

struct OrbitSample {
  PointCloud cloud;
  EmpiricalMeasure measure;
};

// {x, f x, ..., f^{L-1} x} with Birkhoff weights 1/L
OrbitSample orbit_measure(const System& sys, const Point& x, std::size_t length);

enum class EntropyMethod { partition_limit, word_count, ks_bound };
std::string to_string(EntropyMethod m);

struct EntropyEstimate {
  double value = 0.0;
  EntropyMethod method = EntropyMethod::partition_limit;
  nlohmann::ordered_json params;
  std::vector<double> per_n;        // (1/n) H(P^n), n = 1..n_max
  std::vector<double> raw;          // H(P^n)
  std::vector<std::size_t> cells;   // |P^n|
  bool monotone = true;             // per_n nonincreasing up to 1e-9
};

double partition_entropy(const std::vector<double>& weights);
double partition_entropy(const Partition& P, const EmpiricalMeasure& mu);

// Points sharing the same length-n itinerary. Without a labeler, f^k x is snapped
// to the nearest cloud point, which must lie within mesh/2.
Partition refine_partition(const Partition& P, const System& sys, int n, const PointCloud& cloud);

// (1/n) H(P^n) for n = 1..n_max; value = mean of the last three terms
EntropyEstimate metric_entropy_estimate(const System& sys, const Partition& P, const EmpiricalMeasure& mu,
                                        const PointCloud& cloud, int n_max);

// log(#distinct length-n words along the shift orbits of the cloud) / n
EntropyEstimate word_count_entropy(const System& sys, const PointCloud& cloud, int n);

// A finite word containing every binary word of length n exactly once as a window.
Point de_bruijn_point(int n);

struct GeometricPartition {
  Partition partition;
  std::vector<double> radii;        // radius of S_n (n >= 1); S_0 is the whole cloud
  std::vector<double> shell_mass;   // mu(S_n \ {z}), n >= 0
  std::vector<double> cell_mass;    // mu(E_n)
  double entropy = 0.0;
};

// Nested balls S_n around cloud[center] with mu(S_n \ {z}) <= r^n, cells
// E_0 = {z} u (S_0 \ S_1), E_n = S_n \ S_{n+1}.
GeometricPartition geometric_partition(const System& sys, const PointCloud& cloud, const EmpiricalMeasure& mu,
                                       double r, std::size_t center);

// e/(e-1)^2
double ks_series_bound();
// log((1-r)/(1-2r)) - r log(r)/(1-r)^2
double ks_closing_bound(double r);

struct KsRow {
  double r = 0.0;
  bool constructed = false;
  std::string error;
  double entropy = 0.0;
  double closing_bound = 0.0;
  std::size_t cells = 0;
  bool within_series_bound = false;
  bool within_closing_bound = false;
  bool chain_ok = false;  // -mu(E_n) log mu(E_n) <= n r^n log(1/r) for n >= 1
};

struct KsAudit {
  std::vector<KsRow> rows;
  bool closing_decreasing = false;
  double closing_at_tiny_r = 0.0;
  bool passed = false;
};

KsAudit ks_bound_audit(const System& sys, const PointCloud& cloud, const EmpiricalMeasure& mu,
                       const std::vector<double>& r_list, std::size_t center);

}  // namespace ndist
