#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gestauth/authenticator.hpp"
#include "gestauth/eval/attack.hpp"
#include "gestauth/eval/metrics.hpp"
#include "gestauth/eval/roc.hpp"
#include "gestauth/features.hpp"
#include "gestauth/trace.hpp"

namespace gestauth::eval {

enum class DecoySource { corpus, synthetic };

struct KsConfig {
  bool enabled = true;
  int personas = 10;  // personas sampled for the feature analysis
  int pairs = 5;      // sample pairs per persona, within and across

  bool operator==(const KsConfig&) const = default;
};

struct ExperimentConfig {
  int omega = 5;  // enrollment samples per password; the rest are test samples
  EnrollConfig enroll;
  std::vector<double> thresholds{0.5};
  // corpus: the enrollment samples of every other password with the same
  // finger count; synthetic: synthetic_decoys throwaway curves.
  DecoySource decoys = DecoySource::corpus;
  int synthetic_decoys = 50;
  int negatives_per_password = 0;  // 0 uses every eligible negative
  std::vector<AttackSpec> attacks;
  int attack_victims = 0;  // passwords attacked per group, 0 = all
  int attackers_per_victim = 2;
  std::uint64_t seed = 1;
  KsConfig ks;
  int workers = 0;  // 0 = hardware concurrency

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ThresholdResult {
  double threshold = 0.5;
  ConfusionCounts counts;
  Metrics metrics;
};

struct PasswordResult {
  std::string label;
  std::string persona;
  int finger_count = 1;
  int positives = 0;
  int negatives = 0;
  std::vector<ThresholdResult> at_thresholds;
  // Undefined without negatives.
  std::optional<double> auc;
  std::optional<double> recall_at_full_precision;
  std::optional<double> precision_at_75_recall;
  std::optional<double> operating_threshold;  // full_precision_operating_threshold
  std::vector<RocPoint> roc;
  std::vector<PrPoint> pr;
  double enroll_ms = 0.0;
};

struct Envelope {
  std::optional<double> mean;
  std::optional<double> min;
  std::optional<double> max;
  int defined = 0;  // number of passwords contributing
};

Envelope envelope(const std::vector<std::optional<double>>& values);

struct GroupThreshold {
  double threshold = 0.5;
  ConfusionCounts pooled;
  Envelope tpr;
  Envelope fpr;
  Envelope precision;
};

struct GroupSummary {
  std::string group;  // "single" or "multi"
  int finger_count_min = 1;
  int finger_count_max = 1;
  int passwords = 0;
  std::vector<GroupThreshold> at_thresholds;
  Envelope auc;
  Envelope recall_at_full_precision;
  Envelope precision_at_75_recall;
};

struct AttackResult {
  std::string group;
  AttackLevel level = AttackLevel::type1;
  int observations = 1;
  int victims = 0;
  int attempts = 0;
  double acceptance_at_half = 0.0;       // mean over victims, threshold 0.5
  double acceptance_at_operating = 0.0;  // mean over victims, 100%-precision threshold
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

Quartiles quartiles(std::vector<double> values);

struct KsRow {
  Feature feature = Feature::x_coord;
  int within_tests = 0;
  int across_tests = 0;
  Quartiles within_p;
  Quartiles across_p;
  // Median within-persona p above the 75th percentile of across-persona p.
  bool separated = false;
};

struct Histogram {
  std::string name;
  std::vector<double> edges;  // bins are [edges[i], edges[i+1])
  std::vector<int> counts;
  double mean = 0.0;
  double max = 0.0;
};

Histogram histogram(std::string name, const std::vector<double>& values, int bins = 20);

struct EvalReport {
  ExperimentConfig config;
  std::vector<PasswordResult> passwords;
  std::vector<GroupSummary> groups;
  std::vector<AttackResult> attacks;
  std::vector<KsRow> ks;
  std::vector<Histogram> timings;
};

/// Persona part of a corpus label: the text before the first ':'.
std::string persona_of(const std::string& label);

EvalReport run_experiment(const SampleCorpus& corpus, const ExperimentConfig& cfg);

}  // namespace gestauth::eval
