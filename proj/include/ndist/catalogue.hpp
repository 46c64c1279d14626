#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ndist/system.hpp"

namespace ndist {

// (sqrt(5)-1)/2
inline constexpr double kGolden = 0.6180339887498949;

std::string format_real(double v);

class RotationSystem : public System {
 public:
  explicit RotationSystem(double alpha, bool identity = false);
  std::string id() const override;
  Point step(const Point& x) const override;
  Point step_inv(const Point& x) const override;
  Point iterate(const Point& x, std::int64_t n) const override;
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override;
  int default_resolution() const override { return 256; }
  SystemFacts facts() const override;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  bool identity_;
};

class SkewTorusSystem : public System {
 public:
  explicit SkewTorusSystem(double alpha);
  std::string id() const override;
  Point step(const Point& x) const override;
  Point step_inv(const Point& x) const override;
  Point iterate(const Point& x, std::int64_t n) const override;
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override;
  int default_resolution() const override { return 64; }
  SystemFacts facts() const override;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

// Annulus examples: rotation by k on boundary circles plus analytic wandering orbits.
class AnnulusSystem : public System {
 public:
  enum class Kind { three, many, two };

  static std::shared_ptr<AnnulusSystem> make(Kind kind, double k, int N = 4);

  std::string id() const override;
  Point step(const Point& x) const override;
  Point step_inv(const Point& x) const override;
  Point iterate(const Point& x, std::int64_t n) const override;
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override;
  int default_resolution() const override { return 128; }
  SystemFacts facts() const override;
  Point resolve(const Point& x) const override { return polar(x); }

  // Circle points at angles m*k for |m| <= circle_radius on every boundary circle,
  // plus orbit indices |n| <= orbit_radius (when with_orbits).
  PointCloud cloud(int circle_radius, int orbit_radius, bool with_orbits = true) const;

  Kind kind() const { return kind_; }
  double k() const { return k_; }
  int orbit_count() const { return static_cast<int>(gaps_.size()); }
  bool has_outer_circle() const { return kind_ != Kind::two; }
  // polar coordinates of an Annulus or OrbitIndex point
  Annulus polar(const Point& x) const;
  double orbit_radius(int orbit, std::int64_t n) const;

 private:
  AnnulusSystem(Kind kind, double k, int N);
  double radial(double r, std::int64_t n) const;

  Kind kind_;
  double k_;
  int N_;
  std::vector<double> gaps_;
};

class ShiftSystem : public System {
 public:
  std::string id() const override { return "shift2"; }
  Point step(const Point& x) const override;
  Point step_inv(const Point& x) const override;
  Point iterate(const Point& x, std::int64_t n) const override;
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  // all words of length 2W+1 (W = resolution) centred at the origin with zero fill,
  // plus the special points 1^inf, (01)^inf, (10)^inf
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override;
  int default_resolution() const override { return 4; }
  SystemFacts facts() const override;
};

class OnePointSystem : public System {
 public:
  std::string id() const override { return "one_point"; }
  Point step(const Point& x) const override { return x; }
  Point step_inv(const Point& x) const override { return x; }
  Point iterate(const Point& x, std::int64_t) const override { return x; }
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64&) const override { return Circle{0.0}; }
  SystemFacts facts() const override { return {"distal", true, "1"}; }
};

SystemPtr rotation(double alpha = kGolden);
SystemPtr skew_torus(double alpha = kGolden);
SystemPtr annulus3(double k = kGolden);
SystemPtr annulus_n(int N, double k = kGolden);
SystemPtr annulus2(double k = kGolden);
SystemPtr shift2();
SystemPtr identity();
SystemPtr one_point();

std::vector<SystemPtr> catalogue();

// Builds a system from an id such as "annulusN{N=5,k=0.618}",
// "product(annulus2,annulus3)" or "power(rotation{alpha=1/3},2)".
SystemPtr make_system(std::string_view spec);

const AnnulusSystem* as_annulus(const System& sys);

// every point of shift2 whose period divides n (2^n points), as periodic symbols
PointCloud shift_periodic_cloud(int n);

}  // namespace ndist
