#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "gestauth/authenticator.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gestauth;

namespace {

int accepted_count(const std::vector<GestureSample>& samples, const AuthTemplate& t) {
  int n = 0;
  for (const auto& s : samples) n += verify(s, t).accepted ? 1 : 0;
  return n;
}

ErrorKind parse_error_kind(const std::string& doc) {
  try {
    parse_template(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "template parsed";
  return ErrorKind::invalid_value;
}

}  // namespace

TEST(Authenticator, SingleCurveOwnerAcceptedImpostorRejected) {
  const auto e = fixtures::enrolled(1);
  EXPECT_EQ(e.tmpl.curves.size(), 1u);
  EXPECT_FALSE(e.tmpl.hand.has_value());
  EXPECT_GE(accepted_count(e.owner_test, e.tmpl), 6);
  EXPECT_EQ(accepted_count(e.impostor, e.tmpl), 0);
}

TEST(Authenticator, MultiCurveTemplateShape) {
  const auto e = fixtures::enrolled(3);
  EXPECT_EQ(e.tmpl.finger_count, 3);
  EXPECT_EQ(e.tmpl.curves.size(), 3u);
  ASSERT_TRUE(e.tmpl.hand.has_value());
  EXPECT_EQ(e.tmpl.hand->intervals.size(), 3u);
  EXPECT_GE(accepted_count(e.owner_test, e.tmpl), 5);
  EXPECT_EQ(accepted_count(e.impostor, e.tmpl), 0);
  for (const auto& s : e.owner) {
    const Decision d = verify(s, e.tmpl);
    ASSERT_TRUE(d.hand_geometry_test.has_value());
    for (const auto& p : *d.hand_geometry_test) EXPECT_TRUE(p.passed);  // enrollment values lie inside
  }
}

TEST(Authenticator, FingerCountMismatchIsShapeMismatch) {
  const auto e = fixtures::enrolled(2);
  const Decision d = verify(testing_support::arc_sample("x", 1), e.tmpl);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reason, DecisionReason::shape_mismatch);
  EXPECT_DOUBLE_EQ(d.score(), 1.0);
}

TEST(Authenticator, MalformedAttemptIsRejectedNotThrown) {
  const auto e = fixtures::enrolled(1);
  GestureSample bad = testing_support::arc_sample("x", 1, 5);
  for (auto& ev : bad.strokes[0].events) {
    ev.x = 10;
    ev.y = 10;
  }
  const Decision d = verify(bad, e.tmpl);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reason, DecisionReason::shape_mismatch);
  EXPECT_FALSE(d.detail.empty());
}

TEST(Authenticator, ScoreAgreesWithThresholdOverride) {
  const auto e = fixtures::enrolled(2);
  std::vector<GestureSample> all = e.owner_test;
  all.insert(all.end(), e.impostor.begin(), e.impostor.end());
  for (const auto& s : all) {
    const double score = verify(s, e.tmpl).score();
    for (double t : {0.05, 0.3, 0.5, 0.8, 0.999}) {
      EXPECT_EQ(verify(s, e.tmpl, t).accepted, score < t);
    }
  }
}

TEST(Authenticator, RigidMotionGivesIdenticalDecision) {
  const auto e = fixtures::enrolled(2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi), shift(-300, 300);
  for (const auto& s : e.owner_test) {
    const Decision a = verify(s, e.tmpl);
    const Decision b = verify(testing_support::rigid_copy(s, angle(rng), shift(rng), shift(rng)), e.tmpl);
    EXPECT_EQ(a.accepted, b.accepted);
    EXPECT_EQ(a.reason, b.reason);
    ASSERT_EQ(a.curve_test.size(), b.curve_test.size());
    for (std::size_t k = 0; k < a.curve_test.size(); ++k) EXPECT_NEAR(a.curve_test[k].score, b.curve_test[k].score, 1e-9);
  }
}

TEST(Authenticator, HandSlackIsMonotone) {
  auto e = fixtures::enrolled(2);
  std::vector<GestureSample> all = e.owner_test;
  all.insert(all.end(), e.impostor.begin(), e.impostor.end());
  AuthTemplate tight = e.tmpl, loose = e.tmpl;
  tight.hand->slack = 0.0;
  loose.hand->slack = 5.0;
  for (const auto& s : all) {
    if (verify(s, tight).accepted) {
      EXPECT_TRUE(verify(s, e.tmpl).accepted);
    }
    if (verify(s, e.tmpl).accepted) {
      EXPECT_TRUE(verify(s, loose).accepted);
    }
  }
}

TEST(Authenticator, ExtraReferencesOnlyAddPasses) {
  EnrollConfig one = fixtures::fast_config();
  EnrollConfig three = one;
  three.references_per_position = 3;
  const auto e = fixtures::enrolled(1, 23, one);
  const AuthTemplate multi = enroll(e.owner, e.decoys, three);
  ASSERT_EQ(multi.curves.size(), 3u);
  // The first sub-template is the same medoid-trained one.
  EXPECT_EQ(multi.curves[0], e.tmpl.curves[0]);
  std::vector<GestureSample> all = e.owner_test;
  all.insert(all.end(), e.impostor.begin(), e.impostor.end());
  for (const auto& s : all) {
    if (verify(s, e.tmpl).accepted) {
      EXPECT_TRUE(verify(s, multi).accepted);
    }
  }
}

TEST(Authenticator, SingleEnrollmentSampleWorks) {
  auto e = fixtures::enrolled(1);
  const std::vector<GestureSample> one{e.owner.front()};
  const AuthTemplate t = enroll(one, e.decoys, fixtures::fast_config());
  EXPECT_EQ(t.enrolled_samples, 1);
  EXPECT_TRUE(verify(e.owner.front(), t).accepted);
}

TEST(Authenticator, EnrollRejectsMixedFingerCounts) {
  auto e = fixtures::enrolled(1);
  std::vector<GestureSample> mixed = e.owner;
  mixed.push_back(testing_support::arc_sample("two", 2));
  EXPECT_THROW(enroll(mixed, e.decoys, fixtures::fast_config()), Error);
}

TEST(Authenticator, EnrollNeedsMatchingDecoys) {
  auto e = fixtures::enrolled(1);
  const std::vector<GestureSample> decoys{testing_support::arc_sample("d", 2)};
  EXPECT_THROW(enroll(e.owner, decoys, fixtures::fast_config()), Error);
}

TEST(Authenticator, TemplateRoundTripIsFieldExact) {
  for (int fingers : {1, 3}) {
    EnrollConfig cfg = fixtures::fast_config();
    cfg.adjust.xi = 12.5;
    cfg.references_per_position = 2;
    cfg.hand_frame = HandGeometryFrame::normalized;
    const auto e = fixtures::enrolled(fingers, 31, cfg);
    const AuthTemplate back = parse_template(serialize_template(e.tmpl));
    EXPECT_EQ(back, e.tmpl);
    testing_support::TempDir dir("tmpl");
    const auto path = (dir.path() / "t.json").string();
    save_template(path, e.tmpl);
    EXPECT_EQ(load_template(path), e.tmpl);
    for (const auto& s : e.owner_test) EXPECT_EQ(verify(s, back), verify(s, e.tmpl));
  }
}

TEST(Authenticator, CorruptTemplatesAreRejected) {
  const auto e = fixtures::enrolled(2);
  const std::string doc = serialize_template(e.tmpl);
  EXPECT_EQ(parse_error_kind(doc.substr(0, doc.size() / 2)), ErrorKind::malformed_input);
  auto j = nlohmann::json::parse(doc);
  j["version"] = 99;
  EXPECT_EQ(parse_error_kind(j.dump()), ErrorKind::unsupported_version);
  j = nlohmann::json::parse(doc);
  j["hand_geometry"] = nullptr;
  EXPECT_EQ(parse_error_kind(j.dump()), ErrorKind::malformed_input);
  j = nlohmann::json::parse(doc);
  j["curves"][0]["weights"].erase(0);
  EXPECT_EQ(parse_error_kind(j.dump()), ErrorKind::malformed_input);
  j = nlohmann::json::parse(doc);
  j["curves"].erase(1);
  EXPECT_EQ(parse_error_kind(j.dump()), ErrorKind::malformed_input);
}

TEST(Authenticator, EnrollOverrides) {
  const EnrollConfig c = apply_enroll_overrides(
      {}, R"({"eta_s": 4, "xi": 3.5, "max_iterations": 10, "reference": "random", "reference_seed": 8,
              "hand_slack": 1.5, "hand_frame": "normalized", "references_per_position": 2})");
  EXPECT_EQ(c.adjust.eta_s, 4);
  EXPECT_EQ(c.adjust.eta_e, 3);
  EXPECT_EQ(c.adjust.xi, 3.5);
  EXPECT_EQ(c.train.max_iterations, 10);
  EXPECT_EQ(c.reference.kind, ReferenceStrategy::Kind::random);
  EXPECT_EQ(c.reference.seed, 8u);
  EXPECT_DOUBLE_EQ(c.hand_slack, 1.5);
  EXPECT_EQ(c.hand_frame, HandGeometryFrame::normalized);
  EXPECT_EQ(c.references_per_position, 2);
  EXPECT_FALSE(apply_enroll_overrides(c, R"({"xi": null})").adjust.xi.has_value());
  EXPECT_THROW(apply_enroll_overrides({}, R"({"threshold": 0})"), Error);
  EXPECT_THROW(apply_enroll_overrides({}, R"({"learning_rate": -1})"), Error);
  EXPECT_THROW(apply_enroll_overrides({}, R"({"reference": "best"})"), Error);
  EXPECT_THROW(apply_enroll_overrides({}, "[]"), Error);
}
