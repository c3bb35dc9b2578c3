#include "gestauth/dtw.hpp"

namespace gestauth {

Eigen::MatrixXd dtw_cost_matrix(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0 || b.size() == 0) throw Error(ErrorKind::invalid_value, "dtw: empty series");
  const Eigen::Index n = a.size();
  const Eigen::Index m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd d(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double best = (i == 0 && j == 0) ? 0.0 : inf;
      if (i > 0) best = std::min(best, d(i - 1, j));
      if (j > 0) best = std::min(best, d(i, j - 1));
      if (i > 0 && j > 0) best = std::min(best, d(i - 1, j - 1));
      d(i, j) = std::abs(a(i) - b(j)) + best;
    }
  }
  return d;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> dtw_path(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd d = dtw_cost_matrix(a, b);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> path;
  Eigen::Index i = a.size() - 1;
  Eigen::Index j = b.size() - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = d(i - 1, j - 1);
      const double up = d(i - 1, j);
      const double left = d(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

DistanceVector distance_vector(const FeatureSeriesSet& candidate, const FeatureSeriesSet& reference,
                               std::optional<Eigen::Index> band) {
  DistanceVector d;
  d(0) = 1.0;
  for (int k = 0; k < kFeatureCount; ++k) {
    d(k + 1) = dtw_distance(candidate.series[static_cast<std::size_t>(k)],
                            reference.series[static_cast<std::size_t>(k)], band);
  }
  return d;
}

}  // namespace gestauth
