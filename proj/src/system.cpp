#include "ndist/system.hpp"

#include "ndist/errors.hpp"

namespace ndist {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::grid: return "grid";
    case Provenance::orbit: return "orbit";
    case Provenance::random: return "random";
  }
  return "grid";
}

std::optional<std::size_t> PointCloud::find(const Point& p) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == p) return i;
  return std::nullopt;
}

std::optional<std::size_t> PointCloud::index_of(const std::string& name) const {
  for (const auto& [n, i] : named)
    if (n == name) return i;
  return std::nullopt;
}

std::size_t PointCloud::add(Point p, std::string name) {
  points.push_back(std::move(p));
  if (!name.empty()) named.emplace_back(std::move(name), points.size() - 1);
  return points.size() - 1;
}

Point System::iterate(const Point& x, std::int64_t n) const { return iterate_by_loop(*this, x, n); }

void System::require_valid(const Point& x) const {
  if (!valid(x)) throw InvalidPoint(to_string(x) + " is not a point of " + id());
}

Point iterate(const System& sys, const Point& x, std::int64_t n) { return sys.iterate(x, n); }

Point iterate_by_loop(const System& sys, const Point& x, std::int64_t n) {
  Point y = x;
  if (n >= 0)
    for (std::int64_t i = 0; i < n; ++i) y = sys.step(y);
  else
    for (std::int64_t i = 0; i < -n; ++i) y = sys.step_inv(y);
  return y;
}

double distance(const System& sys, const Point& a, const Point& b) { return sys.distance(a, b); }

PointCloud random_cloud(const System& sys, std::size_t count, std::uint64_t seed) {
  PointCloud c;
  c.provenance = Provenance::random;
  c.seed = seed;
  c.system_id = sys.id();
  std::mt19937_64 rng(seed);
  c.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) c.points.push_back(sys.random_point(rng));
  return c;
}

PointCloud map_cloud(const PointCloud& cloud, const PointMap& h) {
  PointCloud out = cloud;
  for (auto& p : out.points) p = h(p);
  return out;
}

PointCloud concat_clouds(const PointCloud& a, const PointCloud& b) {
  PointCloud out = a;
  for (const auto& [name, i] : b.named) out.named.emplace_back(name, i + a.size());
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  return out;
}

}  // namespace ndist
