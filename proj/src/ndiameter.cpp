#include "ndist/ndiameter.hpp"

#include <cmath>

#include "ndist/point.hpp"

namespace ndist {

std::uint64_t binomial(std::uint64_t m, std::uint64_t k) {
  if (k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (m - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

Eigen::MatrixXd pairwise_matrix(const std::vector<std::vector<double>>& rows, LineMetric metric) {
  if (metric == LineMetric::shift) throw ParameterError("shift points need symbolic input, not coordinates");
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& a = rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const auto& b = rows[static_cast<std::size_t>(j)];
      if (a.size() != b.size()) throw ParameterError("rows have different dimensions");
      double s = 0.0;
      for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = metric == LineMetric::torus ? wrap_signed(a[c] - b[c]) : a[c] - b[c];
        s += diff * diff;
      }
      D(i, j) = D(j, i) = std::sqrt(s);
    }
  }
  return D;
}

}  // namespace ndist
