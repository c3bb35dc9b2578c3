#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gestauth {

inline constexpr std::size_t kMaxFingers = 5;

// Screen-space touch event. Origin top-left, y grows downwards.
struct TouchEvent {
  int finger_id = 0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t t = 0;  // ms since sample start
  double pressure = 0.0;
  double size = 0.0;  // stored, never used as a feature

  bool operator==(const TouchEvent&) const = default;
};

struct Stroke {
  int finger_id = 0;
  std::vector<TouchEvent> events;

  std::size_t size() const { return events.size(); }
  std::int64_t first_touch() const { return events.front().t; }

  bool operator==(const Stroke&) const = default;
};

// One drawing attempt. Strokes are ordered by first touch, then finger id.
struct GestureSample {
  std::string sample_id;
  std::string device;
  std::vector<Stroke> strokes;

  std::size_t finger_count() const { return strokes.size(); }

  bool operator==(const GestureSample&) const = default;
};

struct SampleCorpus {
  std::vector<GestureSample> samples;
  std::vector<std::string> labels;  // "<persona>:<curve>" password identifiers

  bool operator==(const SampleCorpus&) const = default;
};

/// Groups interleaved capture-order events into strokes, validates every
/// invariant and sorts strokes by first touch. Throws gestauth::Error.
GestureSample assemble_sample(std::string sample_id, std::string device,
                              const std::vector<TouchEvent>& events);

/// Checks an already-assembled sample (stroke order, ranges, lengths).
void validate_sample(const GestureSample& sample);

GestureSample parse_sample(std::string_view document);
std::string serialize_sample(const GestureSample& sample);

// Line-delimited corpus: one sample document per line, with an optional
// "label" member.
SampleCorpus parse_corpus(std::string_view text);
std::string serialize_corpus(const SampleCorpus& corpus);

GestureSample load_sample(const std::string& path);
void save_sample(const std::string& path, const GestureSample& sample);
SampleCorpus load_corpus(const std::string& path);
void save_corpus(const std::string& path, const SampleCorpus& corpus);

/// Loads every *.json trace in a directory, sorted by file name.
std::vector<GestureSample> load_sample_dir(const std::string& dir);

}  // namespace gestauth
