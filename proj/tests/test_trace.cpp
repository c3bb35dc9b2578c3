#include <gtest/gtest.h>

#include "gestauth/error.hpp"
#include "gestauth/trace.hpp"
#include "support.hpp"

using namespace gestauth;

namespace {

TouchEvent ev(int finger, double x, double y, std::int64_t t, double p = 0.5) {
  TouchEvent e;
  e.finger_id = finger;
  e.x = x;
  e.y = y;
  e.t = t;
  e.pressure = p;
  e.size = 0.2;
  return e;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::malformed_input;
}

}  // namespace

TEST(Trace, AssembleGroupsAndOrdersStrokes) {
  // Finger 7 touches down first, so it becomes stroke 1.
  std::vector<TouchEvent> events = {ev(2, 0, 0, 10), ev(7, 5, 5, 3), ev(2, 1, 1, 20), ev(7, 6, 6, 12),
                                    ev(2, 2, 2, 30), ev(7, 7, 7, 25)};
  const GestureSample s = assemble_sample("a", "dev", events);
  ASSERT_EQ(s.finger_count(), 2u);
  EXPECT_EQ(s.strokes[0].finger_id, 7);
  EXPECT_EQ(s.strokes[1].finger_id, 2);
  EXPECT_EQ(s.strokes[1].size(), 3u);
}

TEST(Trace, EqualFirstTouchBreaksTiesByFingerId) {
  std::vector<TouchEvent> events = {ev(4, 0, 0, 0), ev(1, 9, 9, 0), ev(4, 1, 1, 5), ev(1, 8, 8, 5)};
  const GestureSample s = assemble_sample("a", "dev", events);
  EXPECT_EQ(s.strokes[0].finger_id, 1);
  EXPECT_EQ(s.strokes[1].finger_id, 4);
}

TEST(Trace, RejectsInvalidEvents) {
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {ev(0, 0, 0, 0)}); }), ErrorKind::too_short);
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {ev(0, 0, 0, 5), ev(0, 1, 1, 4)}); }), ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {ev(0, 0, 0, 0), ev(0, 1, 1, 4, 1.5)}); }),
            ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {ev(0, 0, 0, -1), ev(0, 1, 1, 4)}); }), ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {ev(0, NAN, 0, 0), ev(0, 1, 1, 4)}); }), ErrorKind::invalid_value);
  EXPECT_EQ(kind_of([] { assemble_sample("a", "d", {}); }), ErrorKind::malformed_input);
  std::vector<TouchEvent> six;
  for (int f = 0; f < 6; ++f) {
    six.push_back(ev(f, f, 0, 0));
    six.push_back(ev(f, f, 1, 5));
  }
  EXPECT_EQ(kind_of([&] { assemble_sample("a", "d", six); }), ErrorKind::invalid_value);
}

TEST(Trace, EqualTimestampsAllowed) {
  const GestureSample s = assemble_sample("a", "d", {ev(0, 0, 0, 4), ev(0, 1, 1, 4)});
  EXPECT_EQ(s.strokes[0].size(), 2u);
}

TEST(Trace, SerializeRoundTripIsExact) {
  GestureSample s = testing_support::arc_sample("round", 3);
  s.strokes[1].events[4].x = 0.1 + 0.2;  // not representable in short decimal
  s.strokes[2].events[0].pressure = 1.0 / 3.0;
  const GestureSample back = parse_sample(serialize_sample(s));
  EXPECT_EQ(back, s);
}

TEST(Trace, ParseRejectsMalformedDocuments) {
  EXPECT_EQ(kind_of([] { parse_sample("{not json"); }), ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([] { parse_sample("[1,2]"); }), ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([] { parse_sample(R"({"sample_id":"x","device":"d","events":5})"); }),
            ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([] {
              parse_sample(R"({"sample_id":"x","device":"d","events":[{"finger":0,"x":1,"y":1,"t":1.5,"p":0.5,"s":0}]})");
            }),
            ErrorKind::malformed_input);
}

TEST(Trace, CorpusRoundTripKeepsLabels) {
  SampleCorpus c;
  for (int i = 0; i < 4; ++i) {
    c.samples.push_back(testing_support::arc_sample("s" + std::to_string(i), 1 + i % 2, 12, 0.1 * i));
    c.labels.push_back(i < 2 ? "alice:c1" : "bob:c1");
  }
  const SampleCorpus back = parse_corpus(serialize_corpus(c));
  EXPECT_EQ(back, c);
}

TEST(Trace, CorpusRejectsDuplicateIds) {
  SampleCorpus c;
  c.samples = {testing_support::arc_sample("same"), testing_support::arc_sample("same")};
  c.labels = {"a:1", "a:1"};
  EXPECT_EQ(kind_of([&] { parse_corpus(serialize_corpus(c)); }), ErrorKind::invalid_value);
}

TEST(Trace, GoldenFilesLoad) {
  const GestureSample s = load_sample((testing_support::data_dir() / "golden_two_finger.json").string());
  ASSERT_EQ(s.finger_count(), 2u);
  EXPECT_EQ(s.strokes[0].finger_id, 4);
}

TEST(Trace, MissingFileIsNotFound) {
  EXPECT_EQ(kind_of([] { load_sample("/nonexistent/trace.json"); }), ErrorKind::not_found);
}
