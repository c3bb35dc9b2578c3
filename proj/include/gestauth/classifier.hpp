#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gestauth/dtw.hpp"
#include "gestauth/features.hpp"

namespace gestauth {

using WeightVector = Eigen::Matrix<double, kFeatureCount + 1, 1>;
using FeatureStats = Eigen::Matrix<double, kFeatureCount, 1>;
// One distance vector per row.
using DesignMatrix = Eigen::Matrix<double, Eigen::Dynamic, kFeatureCount + 1>;

// Label convention: 0 = owner, 1 = decoy.
enum class CurveClass { owner = 0, other = 1 };

/// z-scoring of d1..d9 with training-set statistics; d0 passes through.
struct Standardization {
  bool enabled = false;
  FeatureStats mean = FeatureStats::Zero();
  FeatureStats deviation = FeatureStats::Ones();

  DistanceVector apply(const DistanceVector& d) const;
  static Standardization fit(const DesignMatrix& raw);

  bool operator==(const Standardization&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.05;
  int max_iterations = 50000;
  double rel_tolerance = 1e-7;
  std::uint64_t seed = 0;
  bool standardize = true;

  bool operator==(const TrainConfig&) const = default;
};

struct TrainingOutcome {
  WeightVector weights = WeightVector::Zero();
  Standardization standardization;
  double final_cost = 0.0;
  int iterations_used = 0;
  double training_accuracy = 0.0;
};

template <typename Scalar>
Scalar sigmoid(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

/// Mean cross-entropy. h is clamped to [1e-12, 1 - 1e-12] inside the logs.
double cost(const WeightVector& w, const DesignMatrix& vectors, const Eigen::VectorXd& labels);

/// Sum-form gradient: sum_i (h(w.d_i) - l_i) d_i, with unclamped h.
WeightVector cost_gradient(const WeightVector& w, const DesignMatrix& vectors, const Eigen::VectorXd& labels);

/// Batch gradient descent from zero weights. An update that raises the cost is
/// rejected and the step halved; descent stops once the relative decrease stays
/// below rel_tolerance for 5 consecutive accepted steps, or at max_iterations.
TrainingOutcome train(std::span<const DistanceVector> owner_vectors, std::span<const DistanceVector> decoy_vectors,
                      const TrainConfig& cfg = {});

/// Builds the training set against owner_sets[reference_index] (the reference
/// itself is excluded) and trains.
TrainingOutcome train(std::size_t reference_index, std::span<const FeatureSeriesSet> owner_sets,
                      std::span<const FeatureSeriesSet> decoy_sets, const TrainConfig& cfg = {});

std::vector<DistanceVector> reference_vectors(const FeatureSeriesSet& reference,
                                              std::span<const FeatureSeriesSet> others);

struct Classification {
  CurveClass label = CurveClass::other;
  double score = 1.0;  // h
};

/// Owner iff h < threshold.
Classification classify(const WeightVector& w, const Standardization& standardization, const DistanceVector& d,
                        double threshold = 0.5);

struct ReferenceStrategy {
  enum class Kind { medoid, random };
  Kind kind = Kind::medoid;
  std::uint64_t seed = 0;

  bool operator==(const ReferenceStrategy&) const = default;
};

/// Owner indices ordered by summed 9-feature DTW distance to all other owner
/// samples, ascending; ties go to the lower index.
std::vector<std::size_t> rank_by_total_distance(std::span<const FeatureSeriesSet> owner_sets);

std::size_t select_reference(std::span<const FeatureSeriesSet> owner_sets, ReferenceStrategy strategy = {});

}  // namespace gestauth
