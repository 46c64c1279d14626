#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ndist/errors.hpp"

namespace ndist {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 2'000'000;

template <typename Scalar>
struct NDiameterResult {
  Scalar value_lower{0};
  Scalar value_upper{0};
  std::vector<std::size_t> witness;
  bool exact = false;
};

using NDiameter = NDiameterResult<double>;

// binomial(m, k), saturating at UINT64_MAX
std::uint64_t binomial(std::uint64_t m, std::uint64_t k);

namespace detail {

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& D) {
  if (D.rows() != D.cols()) throw ParameterError("distance matrix must be square");
}

template <typename Derived>
typename Derived::Scalar subset_min(const Eigen::MatrixBase<Derived>& D, const std::vector<std::size_t>& s) {
  using Scalar = typename Derived::Scalar;
  Scalar v = std::numeric_limits<Scalar>::infinity();
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      v = std::min(v, D(static_cast<Eigen::Index>(s[a]), static_cast<Eigen::Index>(s[b])));
  return v;
}

}  // namespace detail

// Max over (N+1)-subsets of the min pairwise distance, by pruned lexicographic
// enumeration. Ties go to the lexicographically smallest witness.
template <typename Derived>
NDiameterResult<typename Derived::Scalar> diam_n_exact(const Eigen::MatrixBase<Derived>& D, int N,
                                                        std::uint64_t budget = kDefaultEnumerationBudget) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(D);
  if (N < 1) throw ParameterError("N must be positive");
  const auto m = static_cast<std::size_t>(D.rows());
  const auto k = static_cast<std::size_t>(N) + 1;
  NDiameterResult<Scalar> out;
  out.exact = true;
  if (m < k) return out;
  if (binomial(m, k) > budget)
    throw BudgetExceeded("binomial(" + std::to_string(m) + "," + std::to_string(k) +
                         ") exceeds the enumeration budget; use diam_n_bounds");

  Scalar best = Scalar(-1);
  std::vector<std::size_t> chosen, best_set;
  std::vector<Scalar> running;  // running[d] = min pairwise among chosen[0..d]
  chosen.reserve(k);
  running.reserve(k);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  std::function<void(std::size_t)> dfs = [&](std::size_t start) {
    const std::size_t depth = chosen.size();
    if (depth == k) {
      const Scalar v = running.back();
      if (v > best) {
        best = v;
        best_set = chosen;
      }
      return;
    }
    const Scalar cur = depth == 0 ? inf : running.back();
    for (std::size_t i = start; i + (k - depth) <= m; ++i) {
      Scalar v = cur;
      for (std::size_t c : chosen) v = std::min(v, D(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)));
      if (depth > 0 && v <= best) continue;
      chosen.push_back(i);
      running.push_back(v);
      dfs(i + 1);
      chosen.pop_back();
      running.pop_back();
    }
  };
  dfs(0);
  out.value_lower = out.value_upper = best;
  out.witness = best_set;
  return out;
}

// Certified bounds: the better of greedy farthest-point dispersion from the
// diametral pair and a threshold scan in index order for the lower bound; for the upper bound, every member of an optimal (N+1)-set has N
// partners at distance >= the optimum, so the optimum is at most the (N+1)-th largest
// value of "N-th largest distance to another point" over all points.
template <typename Derived>
NDiameterResult<typename Derived::Scalar> diam_n_bounds(const Eigen::MatrixBase<Derived>& D, int N) {
  using Scalar = typename Derived::Scalar;
  detail::require_square(D);
  if (N < 1) throw ParameterError("N must be positive");
  const auto m = static_cast<std::size_t>(D.rows());
  const auto k = static_cast<std::size_t>(N) + 1;
  if (m < k) throw ParameterError("diam_n_bounds needs at least N+1 points");
  auto d = [&](std::size_t a, std::size_t b) { return D(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); };

  std::vector<std::size_t> chosen;
  {
    std::size_t bi = 0, bj = 1;
    Scalar bv = d(0, 1);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (d(i, j) > bv) {
          bv = d(i, j);
          bi = i;
          bj = j;
        }
    chosen = {bi, bj};
  }
  std::vector<Scalar> gap(m, std::numeric_limits<Scalar>::infinity());
  std::vector<char> used(m, 0);
  for (std::size_t c : chosen) {
    used[c] = 1;
    for (std::size_t i = 0; i < m; ++i) gap[i] = std::min(gap[i], d(i, c));
  }
  while (chosen.size() < k) {
    std::size_t pick = m;
    for (std::size_t i = 0; i < m; ++i)
      if (!used[i] && (pick == m || gap[i] > gap[pick])) pick = i;
    used[pick] = 1;
    chosen.push_back(pick);
    for (std::size_t i = 0; i < m; ++i) gap[i] = std::min(gap[i], d(i, pick));
  }
  std::sort(chosen.begin(), chosen.end());

  NDiameterResult<Scalar> out;
  out.witness = chosen;
  out.value_lower = detail::subset_min(D, chosen);

  // Second candidate: largest pairwise distance t for which an index-order scan
  // (take a point when it is >= t from everything taken) collects N+1 points.
  // Exact for points listed in order along a line, where farthest-point greedy is not.
  {
    std::vector<Scalar> levels;
    levels.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) levels.push_back(d(i, j));
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    auto scan = [&](Scalar t) {
      std::vector<std::size_t> taken;
      for (std::size_t i = 0; i < m && taken.size() < k; ++i) {
        bool ok = true;
        for (std::size_t c : taken)
          if (d(i, c) < t) {
            ok = false;
            break;
          }
        if (ok) taken.push_back(i);
      }
      return taken;
    };
    std::size_t lo = 0, hi = levels.size();  // levels[lo] always feasible (smallest distance)
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (scan(levels[mid]).size() == k) lo = mid;
      else hi = mid;
    }
    const auto taken = scan(levels[lo]);
    if (taken.size() == k) {
      const Scalar v = detail::subset_min(D, taken);
      if (v > out.value_lower || (v == out.value_lower && taken < out.witness)) {
        out.value_lower = v;
        out.witness = taken;
      }
    }
  }

  std::vector<Scalar> nth(m);
  std::vector<Scalar> row;
  row.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    row.clear();
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) row.push_back(d(i, j));
    std::nth_element(row.begin(), row.begin() + (N - 1), row.end(), std::greater<Scalar>());
    nth[i] = row[static_cast<std::size_t>(N - 1)];
  }
  std::nth_element(nth.begin(), nth.begin() + N, nth.end(), std::greater<Scalar>());
  out.value_upper = std::max(nth[static_cast<std::size_t>(N)], out.value_lower);
  out.exact = out.value_lower == out.value_upper;
  return out;
}

// Exact when the enumeration fits the budget, bounds otherwise.
template <typename Derived>
NDiameterResult<typename Derived::Scalar> diam_n(const Eigen::MatrixBase<Derived>& D, int N,
                                                  std::uint64_t budget = kDefaultEnumerationBudget) {
  const auto m = static_cast<std::uint64_t>(D.rows());
  if (m <= static_cast<std::uint64_t>(N) || binomial(m, static_cast<std::uint64_t>(N) + 1) <= budget)
    return diam_n_exact(D, N, budget);
  return diam_n_bounds(D, N);
}

enum class LineMetric { euclid, torus, shift };

// Distance matrix of rows of coordinates (euclid / torus) for the CLI and tests.
Eigen::MatrixXd pairwise_matrix(const std::vector<std::vector<double>>& rows, LineMetric metric);

}  // namespace ndist
