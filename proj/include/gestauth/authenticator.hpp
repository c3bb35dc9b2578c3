#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gestauth/classifier.hpp"
#include "gestauth/features.hpp"
#include "gestauth/preprocess.hpp"
#include "gestauth/trace.hpp"

namespace gestauth {

inline constexpr int kTemplateVersion = 1;

struct EnrollConfig {
  AdjustConfig adjust;
  TrainConfig train;
  ReferenceStrategy reference;
  int references_per_position = 1;  // >1 enables the multi-reference remedy
  double threshold = 0.5;
  double hand_slack = 0.0;  // fraction of interval width added on each side
  HandGeometryFrame hand_frame = HandGeometryFrame::adjusted;
  int max_failed_attempts = 5;

  bool operator==(const EnrollConfig&) const = default;
};

struct CurveSubTemplate {
  int position = 1;  // 1-based finger position
  FeatureSeriesSet reference_features;
  WeightVector weights = WeightVector::Zero();
  Standardization standardization;
  double threshold = 0.5;

  bool operator==(const CurveSubTemplate&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Interval&) const = default;
};

struct HandGeomSubTemplate {
  int finger_count = 0;
  std::vector<Interval> intervals;  // lexicographic pair order
  double slack = 0.0;

  Interval widened(std::size_t pair) const;
  bool admits(std::size_t pair, double distance) const;

  bool operator==(const HandGeomSubTemplate&) const = default;
};

struct AuthTemplate {
  int version = kTemplateVersion;
  int finger_count = 1;
  int enrolled_samples = 0;
  std::vector<CurveSubTemplate> curves;  // one or more per position
  std::optional<HandGeomSubTemplate> hand;
  EnrollConfig config;
  int max_failed_attempts = 5;

  bool operator==(const AuthTemplate&) const = default;
};

enum class DecisionReason { ok, curve_fail, hand_geom_fail, shape_mismatch };

std::string_view to_string(DecisionReason reason);

struct CurveTestResult {
  int position = 1;
  double score = 1.0;  // lowest h over the position's sub-templates
  bool passed = false;

  bool operator==(const CurveTestResult&) const = default;
};

struct PairTestResult {
  int first = 1;
  int second = 2;
  double distance = 0.0;
  bool passed = false;

  bool operator==(const PairTestResult&) const = default;
};

struct Decision {
  bool accepted = false;
  DecisionReason reason = DecisionReason::shape_mismatch;
  std::vector<CurveTestResult> curve_test;
  std::optional<std::vector<PairTestResult>> hand_geometry_test;
  std::string detail;  // set for shape_mismatch

  /// Max over positions of the curve score; 1 when hand geometry fails or the
  /// shape mismatches. accepted(t) == (score() < t) for t in [0, 1].
  double score() const;

  bool operator==(const Decision&) const = default;
};

/// Output of the shared adjust/normalize/extract path used by both phases.
struct ProcessedSample {
  std::vector<AdjustedCurve> curves;
  std::vector<FeatureSeriesSet> features;
  std::optional<HandGeometry> hand;

  int finger_count() const { return static_cast<int>(features.size()); }
};

ProcessedSample process_sample(const GestureSample& sample, const AdjustConfig& adjust,
                               HandGeometryFrame frame = HandGeometryFrame::adjusted);

AuthTemplate enroll(std::span<const GestureSample> samples, std::span<const GestureSample> decoys,
                    const EnrollConfig& cfg = {});

/// Enrollment over pre-processed samples. Decoys whose finger count differs
/// from the owner's are ignored.
AuthTemplate enroll_processed(std::span<const ProcessedSample> owners, std::span<const ProcessedSample> decoys,
                              const EnrollConfig& cfg = {});

/// Never throws on attacker-controlled input; malformed samples are rejected
/// with shape_mismatch.
Decision verify(const GestureSample& sample, const AuthTemplate& tmpl,
                std::optional<double> threshold_override = std::nullopt);

Decision verify_processed(const ProcessedSample& sample, const AuthTemplate& tmpl,
                          std::optional<double> threshold_override = std::nullopt);

/// Overlays the keys present in a flat JSON object (eta_s, eta_e, xi,
/// xi_fraction, learning_rate, max_iterations, rel_tolerance, train_seed,
/// standardize, reference, reference_seed, references_per_position,
/// threshold, hand_slack, hand_frame, max_failed_attempts) onto `base`.
EnrollConfig apply_enroll_overrides(EnrollConfig base, std::string_view json_object);

void validate_enroll_config(const EnrollConfig& cfg);

std::string serialize_template(const AuthTemplate& tmpl);
AuthTemplate parse_template(std::string_view document);

AuthTemplate load_template(const std::string& path);
void save_template(const std::string& path, const AuthTemplate& tmpl);

}  // namespace gestauth
