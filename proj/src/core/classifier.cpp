#include "gestauth/classifier.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace gestauth {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr int kStallIterations = 5;

Eigen::VectorXd scores(const WeightVector& w, const DesignMatrix& x) {
  return (x * w).unaryExpr([](double z) { return sigmoid(z); });
}

double mean_cross_entropy(const Eigen::VectorXd& h, const Eigen::VectorXd& labels) {
  const Eigen::ArrayXd hc = h.array().max(kLogClamp).min(1.0 - kLogClamp);
  const Eigen::ArrayXd l = labels.array();
  return -(l * hc.log() + (1.0 - l) * (1.0 - hc).log()).mean();
}

DesignMatrix stack(std::span<const DistanceVector> a, std::span<const DistanceVector> b) {
  DesignMatrix x(static_cast<Eigen::Index>(a.size() + b.size()), kFeatureCount + 1);
  Eigen::Index row = 0;
  for (const auto& d : a) x.row(row++) = d.transpose();
  for (const auto& d : b) x.row(row++) = d.transpose();
  return x;
}

}  // namespace

DistanceVector Standardization::apply(const DistanceVector& d) const {
  if (!enabled) return d;
  DistanceVector out = d;
  out.tail<kFeatureCount>() = (d.tail<kFeatureCount>() - mean).cwiseQuotient(deviation);
  return out;
}

Standardization Standardization::fit(const DesignMatrix& raw) {
  Standardization s;
  s.enabled = true;
  const auto features = raw.rightCols<kFeatureCount>();
  s.mean = features.colwise().mean().transpose();
  const Eigen::MatrixXd centred = features.rowwise() - s.mean.transpose();
  s.deviation = (centred.colwise().squaredNorm() / static_cast<double>(raw.rows())).cwiseSqrt().transpose();
  // Constant columns (e.g. identical pressure everywhere) keep unit scale.
  for (int k = 0; k < kFeatureCount; ++k) {
    if (!(s.deviation(k) > 1e-12)) s.deviation(k) = 1.0;
  }
  return s;
}

double cost(const WeightVector& w, const DesignMatrix& vectors, const Eigen::VectorXd& labels) {
  return mean_cross_entropy(scores(w, vectors), labels);
}

WeightVector cost_gradient(const WeightVector& w, const DesignMatrix& vectors, const Eigen::VectorXd& labels) {
  return vectors.transpose() * (scores(w, vectors) - labels);
}

TrainingOutcome train(std::span<const DistanceVector> owner_vectors, std::span<const DistanceVector> decoy_vectors,
                      const TrainConfig& cfg) {
  if (owner_vectors.empty() || decoy_vectors.empty()) {
    throw Error(ErrorKind::invalid_value, "training needs at least one owner and one decoy vector");
  }
  if (!(cfg.learning_rate > 0.0)) throw Error(ErrorKind::invalid_value, "learning_rate must be positive");

  TrainingOutcome out;
  DesignMatrix x = stack(owner_vectors, decoy_vectors);
  if (cfg.standardize) {
    out.standardization = Standardization::fit(x);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x.row(r) = out.standardization.apply(x.row(r).transpose()).transpose();
    }
  }
  Eigen::VectorXd labels(x.rows());
  labels.head(static_cast<Eigen::Index>(owner_vectors.size())).setZero();
  labels.tail(static_cast<Eigen::Index>(decoy_vectors.size())).setOnes();

  WeightVector w = WeightVector::Zero();
  Eigen::VectorXd h = scores(w, x);
  double j = mean_cross_entropy(h, labels);
  double step = cfg.learning_rate;
  int stalled = 0;
  int it = 0;
  while (it < cfg.max_iterations) {
    ++it;
    const WeightVector candidate = w - step * (x.transpose() * (h - labels));
    const Eigen::VectorXd h_next = scores(candidate, x);
    const double j_next = mean_cross_entropy(h_next, labels);
    if (!std::isfinite(j_next) || !candidate.allFinite()) {
      throw Error(ErrorKind::training_diverged, "cost became non-finite; use a smaller learning_rate");
    }
    if (j_next > j) {
      step *= 0.5;
      if (step < 1e-300) break;
      continue;
    }
    const double relative = (j - j_next) / std::max(j, kLogClamp);
    w = candidate;
    h = h_next;
    j = j_next;
    stalled = relative < cfg.rel_tolerance ? stalled + 1 : 0;
    if (stalled >= kStallIterations) break;
  }

  out.weights = w;
  out.final_cost = j;
  out.iterations_used = it;
  Eigen::Index correct = 0;
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    if ((h(r) < 0.5) == (labels(r) == 0.0)) ++correct;
  }
  out.training_accuracy = static_cast<double>(correct) / static_cast<double>(x.rows());
  return out;
}

std::vector<DistanceVector> reference_vectors(const FeatureSeriesSet& reference,
                                              std::span<const FeatureSeriesSet> others) {
  std::vector<DistanceVector> out;
  out.reserve(others.size());
  for (const auto& o : others) out.push_back(distance_vector(o, reference));
  return out;
}

TrainingOutcome train(std::size_t reference_index, std::span<const FeatureSeriesSet> owner_sets,
                      std::span<const FeatureSeriesSet> decoy_sets, const TrainConfig& cfg) {
  if (reference_index >= owner_sets.size()) throw Error(ErrorKind::invalid_value, "reference index out of range");
  const auto& reference = owner_sets[reference_index];
  std::vector<DistanceVector> owners;
  for (std::size_t i = 0; i < owner_sets.size(); ++i) {
    if (i != reference_index) owners.push_back(distance_vector(owner_sets[i], reference));
  }
  if (owners.empty()) {
    // A single enrollment sample: the reference against itself is the only
    // owner example available.
    owners.push_back(distance_vector(reference, reference));
  }
  return train(owners, reference_vectors(reference, decoy_sets), cfg);
}

Classification classify(const WeightVector& w, const Standardization& standardization, const DistanceVector& d,
                        double threshold) {
  Classification c;
  c.score = sigmoid(w.dot(standardization.apply(d)));
  c.label = c.score < threshold ? CurveClass::owner : CurveClass::other;
  return c;
}

std::vector<std::size_t> rank_by_total_distance(std::span<const FeatureSeriesSet> owner_sets) {
  const std::size_t n = owner_sets.size();
  std::vector<double> total(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance_vector(owner_sets[i], owner_sets[j]).tail<kFeatureCount>().sum();
      total[i] += d;
      total[j] += d;
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return total[a] < total[b]; });
  return order;
}

std::size_t select_reference(std::span<const FeatureSeriesSet> owner_sets, ReferenceStrategy strategy) {
  if (owner_sets.empty()) throw Error(ErrorKind::invalid_value, "no owner samples");
  if (owner_sets.size() == 1) return 0;
  if (strategy.kind == ReferenceStrategy::Kind::random) {
    std::mt19937_64 rng(strategy.seed);
    std::uniform_int_distribution<std::size_t> pick(0, owner_sets.size() - 1);
    return pick(rng);
  }
  return rank_by_total_distance(owner_sets).front();
}

}  // namespace gestauth
