#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ndist/point.hpp"

namespace ndist {

enum class Provenance { grid, orbit, random };

std::string to_string(Provenance p);

struct PointCloud {
  std::vector<Point> points;
  Provenance provenance = Provenance::grid;
  std::uint64_t seed = 0;
  std::string system_id;
  // optional names for designated points ("p", "inner0", ...)
  std::vector<std::pair<std::string, std::size_t>> named;

  std::size_t size() const { return points.size(); }
  const Point& operator[](std::size_t i) const { return points[i]; }

  std::optional<std::size_t> find(const Point& p) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::size_t add(Point p, std::string name = {});
};

// Analytic facts recorded per catalogue system (shown by the CLI catalogue listing).
struct SystemFacts {
  std::string distality;
  bool omega_in_ap = false;
  std::string minimal_sets;
};

class System {
 public:
  virtual ~System() = default;

  virtual std::string id() const = 0;
  virtual Point step(const Point& x) const = 0;
  virtual Point step_inv(const Point& x) const = 0;
  // Default: composition loop. Systems with a closed form override it.
  virtual Point iterate(const Point& x, std::int64_t n) const;
  virtual double distance(const Point& a, const Point& b) const = 0;
  virtual bool valid(const Point& x) const = 0;
  virtual PointCloud sample(int resolution, std::uint64_t seed) const = 0;
  virtual Point random_point(std::mt19937_64& rng) const = 0;
  virtual int default_resolution() const { return 64; }
  virtual SystemFacts facts() const { return {}; }
  // Same point in the representation that is cheapest for repeated metric
  // evaluation (e.g. orbit indices become polar coordinates). Only used internally.
  virtual Point resolve(const Point& x) const { return x; }

  PointCloud sample() const { return sample(default_resolution(), 0); }
  void require_valid(const Point& x) const;
};

using SystemPtr = std::shared_ptr<const System>;
using PointMap = std::function<Point(const Point&)>;

Point iterate(const System& sys, const Point& x, std::int64_t n);
Point iterate_by_loop(const System& sys, const Point& x, std::int64_t n);
double distance(const System& sys, const Point& a, const Point& b);

PointCloud random_cloud(const System& sys, std::size_t count, std::uint64_t seed);
PointCloud map_cloud(const PointCloud& cloud, const PointMap& h);
PointCloud concat_clouds(const PointCloud& a, const PointCloud& b);

}  // namespace ndist
