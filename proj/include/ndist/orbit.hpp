#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ndist/system.hpp"

namespace ndist {

// min / max over |n| <= H of d(f^n x, f^n y)
double min_orbit_distance(const System& sys, const Point& x, const Point& y, int H);
double max_orbit_distance(const System& sys, const Point& x, const Point& y, int H);

// Trajectories of every cloud point over [-H, H], plus the pairwise tables of
// minimum and maximum distance along the window.
class OrbitTable {
 public:
  OrbitTable(const System& sys, const PointCloud& cloud, int horizon, bool pairwise = true);

  const System& system() const { return *sys_; }
  const PointCloud& cloud() const { return *cloud_; }
  int horizon() const { return H_; }
  std::size_t size() const { return m_; }

  // resolved representation of f^n(x_i), |n| <= H
  const Point& at(std::size_t i, int n) const { return traj_[i * width() + static_cast<std::size_t>(n + H_)]; }
  double distance(std::size_t i, std::size_t j, int n) const { return sys_->distance(at(i, n), at(j, n)); }

  const Eigen::MatrixXd& min_distance() const { return min_; }
  const Eigen::MatrixXd& max_distance() const { return max_; }
  bool has_pairwise() const { return pairwise_; }

  // pairwise distances of the given cloud indices at time n
  Eigen::MatrixXd snapshot(const std::vector<std::size_t>& idx, int n) const;

 private:
  std::size_t width() const { return static_cast<std::size_t>(2 * H_ + 1); }

  const System* sys_;
  const PointCloud* cloud_;
  int H_;
  std::size_t m_;
  bool pairwise_;
  std::vector<Point> traj_;
  Eigen::MatrixXd min_, max_;
};

}  // namespace ndist
