#include "ndist/orbit.hpp"

#include <algorithm>
#include <limits>

#include "ndist/errors.hpp"
#include "ndist/parallel.hpp"

namespace ndist {

double min_orbit_distance(const System& sys, const Point& x, const Point& y, int H) {
  if (H < 0) throw ParameterError("horizon must be nonnegative");
  double best = std::numeric_limits<double>::infinity();
  for (int n = -H; n <= H; ++n) {
    best = std::min(best, sys.distance(sys.resolve(sys.iterate(x, n)), sys.resolve(sys.iterate(y, n))));
    if (best == 0.0) break;
  }
  return best;
}

double max_orbit_distance(const System& sys, const Point& x, const Point& y, int H) {
  if (H < 0) throw ParameterError("horizon must be nonnegative");
  double best = 0.0;
  for (int n = -H; n <= H; ++n)
    best = std::max(best, sys.distance(sys.resolve(sys.iterate(x, n)), sys.resolve(sys.iterate(y, n))));
  return best;
}

OrbitTable::OrbitTable(const System& sys, const PointCloud& cloud, int horizon, bool pairwise)
    : sys_(&sys), cloud_(&cloud), H_(horizon), m_(cloud.size()), pairwise_(pairwise) {
  if (horizon < 0) throw ParameterError("horizon must be nonnegative");
  traj_.resize(m_ * width());
  parallel_for(m_, [&](std::size_t i) {
    for (int n = -H_; n <= H_; ++n) traj_[i * width() + static_cast<std::size_t>(n + H_)] = sys.resolve(sys.iterate(cloud[i], n));
  });
  if (!pairwise) return;

  min_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
  max_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
  const std::size_t w = width();
  // row i owns the entries (i,j) and (j,i) for j > i
  parallel_for(m_, [&](std::size_t i) {
    const Point* ti = &traj_[i * w];
    for (std::size_t j = i + 1; j < m_; ++j) {
      const Point* tj = &traj_[j * w];
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t t = 0; t < w; ++t) {
        const double d = sys.distance(ti[t], tj[t]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      min_(a, b) = min_(b, a) = lo;
      max_(a, b) = max_(b, a) = hi;
    }
  });
}

Eigen::MatrixXd OrbitTable::snapshot(const std::vector<std::size_t>& idx, int n) const {
  if (n < -H_ || n > H_) throw ParameterError("snapshot time outside the tabulated window");
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = a + 1; b < k; ++b)
      D(a, b) = D(b, a) = distance(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)], n);
  return D;
}

}  // namespace ndist
