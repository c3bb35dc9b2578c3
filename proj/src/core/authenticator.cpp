#include "gestauth/authenticator.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace gestauth {

std::string_view to_string(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::ok:
      return "ok";
    case DecisionReason::curve_fail:
      return "curve_fail";
    case DecisionReason::hand_geom_fail:
      return "hand_geom_fail";
    case DecisionReason::shape_mismatch:
      return "shape_mismatch";
  }
  return "unknown";
}

Interval HandGeomSubTemplate::widened(std::size_t pair) const {
  const Interval& iv = intervals.at(pair);
  const double pad = slack * (iv.hi - iv.lo);
  return {iv.lo - pad, iv.hi + pad};
}

bool HandGeomSubTemplate::admits(std::size_t pair, double distance) const {
  const Interval iv = widened(pair);
  return distance >= iv.lo && distance <= iv.hi;
}

double Decision::score() const {
  if (reason == DecisionReason::shape_mismatch || curve_test.empty()) return 1.0;
  if (hand_geometry_test) {
    for (const auto& p : *hand_geometry_test) {
      if (!p.passed) return 1.0;
    }
  }
  double worst = 0.0;
  for (const auto& c : curve_test) worst = std::max(worst, c.score);
  return worst;
}

ProcessedSample process_sample(const GestureSample& sample, const AdjustConfig& adjust, HandGeometryFrame frame) {
  validate_sample(sample);
  ProcessedSample out;
  out.curves = adjust_sample(sample, adjust);
  out.features.reserve(out.curves.size());
  for (const auto& c : out.curves) out.features.push_back(extract_features(c));
  if (out.curves.size() >= 2) out.hand = hand_geometry(out.curves, frame);
  return out;
}

namespace {

std::vector<std::size_t> choose_references(std::span<const FeatureSeriesSet> owners, const EnrollConfig& cfg) {
  const std::size_t k =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.references_per_position)), 1, owners.size());
  if (cfg.reference.kind == ReferenceStrategy::Kind::medoid) {
    auto ranked = rank_by_total_distance(owners);
    ranked.resize(k);
    return ranked;
  }
  std::vector<std::size_t> picks{select_reference(owners, cfg.reference)};
  if (k > 1) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < owners.size(); ++i) {
      if (i != picks.front()) rest.push_back(i);
    }
    std::mt19937_64 rng(cfg.reference.seed + 1);
    std::shuffle(rest.begin(), rest.end(), rng);
    picks.insert(picks.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(k - 1));
  }
  return picks;
}

}  // namespace

AuthTemplate enroll_processed(std::span<const ProcessedSample> owners, std::span<const ProcessedSample> decoys,
                              const EnrollConfig& cfg) {
  validate_enroll_config(cfg);
  if (owners.empty()) throw Error(ErrorKind::invalid_value, "enrollment needs at least one sample");
  const int m = owners.front().finger_count();
  for (const auto& o : owners) {
    if (o.finger_count() != m) throw Error(ErrorKind::invalid_value, "inconsistent finger count across samples");
  }

  AuthTemplate tmpl;
  tmpl.finger_count = m;
  tmpl.enrolled_samples = static_cast<int>(owners.size());
  tmpl.config = cfg;
  tmpl.max_failed_attempts = cfg.max_failed_attempts;

  for (int p = 0; p < m; ++p) {
    std::vector<FeatureSeriesSet> owner_sets;
    for (const auto& o : owners) owner_sets.push_back(o.features[static_cast<std::size_t>(p)]);
    std::vector<FeatureSeriesSet> decoy_sets;
    for (const auto& d : decoys) {
      if (d.finger_count() == m) decoy_sets.push_back(d.features[static_cast<std::size_t>(p)]);
    }
    if (decoy_sets.empty()) throw Error(ErrorKind::invalid_value, "no decoy curves with a matching finger count");

    for (std::size_t ref : choose_references(owner_sets, cfg)) {
      const TrainingOutcome trained = train(ref, owner_sets, decoy_sets, cfg.train);
      CurveSubTemplate sub;
      sub.position = p + 1;
      sub.reference_features = owner_sets[ref];
      sub.weights = trained.weights;
      sub.standardization = trained.standardization;
      sub.threshold = cfg.threshold;
      tmpl.curves.push_back(std::move(sub));
    }
  }

  if (m >= 2) {
    HandGeomSubTemplate hand;
    hand.finger_count = m;
    hand.slack = cfg.hand_slack;
    const auto pair_count = static_cast<Eigen::Index>(HandGeometry::pairs(m).size());
    for (Eigen::Index k = 0; k < pair_count; ++k) {
      Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
      for (const auto& o : owners) {
        iv.lo = std::min(iv.lo, o.hand->distances(k));
        iv.hi = std::max(iv.hi, o.hand->distances(k));
      }
      hand.intervals.push_back(iv);
    }
    tmpl.hand = std::move(hand);
  }
  return tmpl;
}

AuthTemplate enroll(std::span<const GestureSample> samples, std::span<const GestureSample> decoys,
                    const EnrollConfig& cfg) {
  std::vector<ProcessedSample> owners;
  owners.reserve(samples.size());
  for (const auto& s : samples) owners.push_back(process_sample(s, cfg.adjust, cfg.hand_frame));
  std::vector<ProcessedSample> processed_decoys;
  processed_decoys.reserve(decoys.size());
  for (const auto& d : decoys) processed_decoys.push_back(process_sample(d, cfg.adjust, cfg.hand_frame));
  return enroll_processed(owners, processed_decoys, cfg);
}

Decision verify_processed(const ProcessedSample& sample, const AuthTemplate& tmpl,
                          std::optional<double> threshold_override) {
  Decision decision;
  if (sample.finger_count() != tmpl.finger_count) {
    decision.reason = DecisionReason::shape_mismatch;
    decision.detail = "finger count " + std::to_string(sample.finger_count()) + " differs from template " +
                      std::to_string(tmpl.finger_count);
    return decision;
  }

  bool curves_ok = true;
  for (int p = 1; p <= tmpl.finger_count; ++p) {
    CurveTestResult result;
    result.position = p;
    bool any_sub = false;
    const auto& candidate = sample.features[static_cast<std::size_t>(p - 1)];
    for (const auto& sub : tmpl.curves) {
      if (sub.position != p) continue;
      const double threshold = threshold_override.value_or(sub.threshold);
      const Classification c = classify(sub.weights, sub.standardization, distance_vector(candidate, sub.reference_features),
                                        threshold);
      result.score = any_sub ? std::min(result.score, c.score) : c.score;
      result.passed = result.passed || c.label == CurveClass::owner;
      any_sub = true;
    }
    curves_ok = curves_ok && result.passed;
    decision.curve_test.push_back(result);
  }

  bool hand_ok = true;
  if (tmpl.hand && sample.hand) {
    std::vector<PairTestResult> pairs;
    const auto keys = HandGeometry::pairs(tmpl.finger_count);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const double d = sample.hand->distances(static_cast<Eigen::Index>(k));
      const bool ok = tmpl.hand->admits(k, d);
      pairs.push_back({keys[k].first, keys[k].second, d, ok});
      hand_ok = hand_ok && ok;
    }
    decision.hand_geometry_test = std::move(pairs);
  }

  decision.accepted = curves_ok && hand_ok;
  decision.reason = !curves_ok ? DecisionReason::curve_fail
                    : !hand_ok ? DecisionReason::hand_geom_fail
                               : DecisionReason::ok;
  return decision;
}

Decision verify(const GestureSample& sample, const AuthTemplate& tmpl, std::optional<double> threshold_override) {
  ProcessedSample processed;
  try {
    processed = process_sample(sample, tmpl.config.adjust, tmpl.config.hand_frame);
  } catch (const Error& e) {
    Decision rejected;
    rejected.reason = DecisionReason::shape_mismatch;
    rejected.detail = e.what();
    return rejected;
  }
  return verify_processed(processed, tmpl, threshold_override);
}

}  // namespace gestauth
