#pragma once

#include "ndist/system.hpp"

namespace ndist {

class ProductSystem : public System {
 public:
  ProductSystem(SystemPtr f, SystemPtr g);
  std::string id() const override;
  Point step(const Point& x) const override;
  Point step_inv(const Point& x) const override;
  Point iterate(const Point& x, std::int64_t n) const override;
  // max metric
  double distance(const Point& a, const Point& b) const override;
  bool valid(const Point& x) const override;
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override;
  int default_resolution() const override { return 8; }
  SystemFacts facts() const override;
  Point resolve(const Point& x) const override;

  const SystemPtr& first() const { return f_; }
  const SystemPtr& second() const { return g_; }

 private:
  SystemPtr f_, g_;
};

class PowerSystem : public System {
 public:
  PowerSystem(SystemPtr f, std::int64_t k);
  std::string id() const override;
  Point step(const Point& x) const override { return f_->iterate(x, k_); }
  Point step_inv(const Point& x) const override { return f_->iterate(x, -k_); }
  Point iterate(const Point& x, std::int64_t n) const override { return f_->iterate(x, n * k_); }
  double distance(const Point& a, const Point& b) const override { return f_->distance(a, b); }
  bool valid(const Point& x) const override { return f_->valid(x); }
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override { return f_->random_point(rng); }
  int default_resolution() const override { return f_->default_resolution(); }
  SystemFacts facts() const override { return f_->facts(); }
  Point resolve(const Point& x) const override { return f_->resolve(x); }

  const SystemPtr& base() const { return f_; }
  std::int64_t power() const { return k_; }

 private:
  SystemPtr f_;
  std::int64_t k_;
};

class ConjugateSystem : public System {
 public:
  ConjugateSystem(SystemPtr f, PointMap h, PointMap h_inv, std::string label);
  std::string id() const override;
  Point step(const Point& x) const override { return h_(f_->step(h_inv_(x))); }
  Point step_inv(const Point& x) const override { return h_(f_->step_inv(h_inv_(x))); }
  Point iterate(const Point& x, std::int64_t n) const override { return h_(f_->iterate(h_inv_(x), n)); }
  double distance(const Point& a, const Point& b) const override { return f_->distance(a, b); }
  bool valid(const Point& x) const override { return f_->valid(h_inv_(x)); }
  PointCloud sample(int resolution, std::uint64_t seed) const override;
  Point random_point(std::mt19937_64& rng) const override { return h_(f_->random_point(rng)); }
  int default_resolution() const override { return f_->default_resolution(); }
  SystemFacts facts() const override { return f_->facts(); }
  Point resolve(const Point& x) const override { return f_->resolve(x); }

  // throws ConjugacyError if h and h_inv are not mutually inverse on the cloud (1e-9)
  void verify_on(const PointCloud& cloud) const;
  const PointMap& h() const { return h_; }
  const PointMap& h_inv() const { return h_inv_; }

 private:
  SystemPtr f_;
  PointMap h_, h_inv_;
  std::string label_;
};

SystemPtr product_system(SystemPtr f, SystemPtr g);
SystemPtr power_system(SystemPtr f, std::int64_t k);
// Checks h/h_inv on f's default cloud (and on `check_cloud` when given) before returning.
SystemPtr conjugate_system(SystemPtr f, PointMap h, PointMap h_inv, std::string label = "h",
                           const PointCloud* check_cloud = nullptr);

PointCloud product_cloud(const PointCloud& a, const PointCloud& b);

// coordinate projections for Pair points
Point project(const Point& x, std::size_t component);

// angle shift by beta for Circle / Annulus / OrbitIndex / Torus (x and y) points
PointMap angle_shift(double beta);

}  // namespace ndist
