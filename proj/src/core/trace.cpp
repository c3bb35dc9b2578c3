#include "gestauth/trace.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gestauth/error.hpp"
#include "json.hpp"

namespace gestauth {

using nlohmann::json;

namespace {

void check_event(const TouchEvent& e) {
  if (!std::isfinite(e.x) || !std::isfinite(e.y)) {
    throw Error(ErrorKind::invalid_value, "coordinate not finite");
  }
  if (e.t < 0) throw Error(ErrorKind::invalid_value, "negative timestamp");
  if (!(e.pressure >= 0.0 && e.pressure <= 1.0)) {
    throw Error(ErrorKind::invalid_value, "pressure out of range");
  }
  if (!(e.size >= 0.0 && e.size <= 1.0)) {
    throw Error(ErrorKind::invalid_value, "size out of range");
  }
}

bool stroke_before(const Stroke& a, const Stroke& b) {
  if (a.first_touch() != b.first_touch()) return a.first_touch() < b.first_touch();
  return a.finger_id < b.finger_id;
}

json sample_to_json(const GestureSample& sample) {
  json events = json::array();
  for (const auto& stroke : sample.strokes) {
    for (const auto& e : stroke.events) {
      events.push_back({{"finger", e.finger_id},
                        {"x", e.x},
                        {"y", e.y},
                        {"t", e.t},
                        {"p", e.pressure},
                        {"s", e.size}});
    }
  }
  return {{"sample_id", sample.sample_id}, {"device", sample.device}, {"events", std::move(events)}};
}

GestureSample sample_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::malformed_input, "trace document is not an object");
  try {
    std::vector<TouchEvent> events;
    const auto& arr = doc.at("events");
    if (!arr.is_array()) throw Error(ErrorKind::malformed_input, "events is not an array");
    events.reserve(arr.size());
    for (const auto& item : arr) {
      TouchEvent e;
      e.finger_id = item.at("finger").get<int>();
      e.x = item.at("x").get<double>();
      e.y = item.at("y").get<double>();
      if (!item.at("t").is_number_integer()) {
        throw Error(ErrorKind::malformed_input, "timestamp is not an integer");
      }
      e.t = item.at("t").get<std::int64_t>();
      e.pressure = item.at("p").get<double>();
      e.size = item.at("s").get<double>();
      events.push_back(e);
    }
    return assemble_sample(doc.at("sample_id").get<std::string>(),
                           doc.at("device").get<std::string>(), events);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::malformed_input, std::string("malformed trace document: ") + ex.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::not_found, "cannot write " + path);
  out << content;
}

}  // namespace

GestureSample assemble_sample(std::string sample_id, std::string device,
                              const std::vector<TouchEvent>& events) {
  std::map<int, Stroke> by_finger;
  for (const auto& e : events) {
    check_event(e);
    auto& stroke = by_finger[e.finger_id];
    stroke.finger_id = e.finger_id;
    if (!stroke.events.empty() && e.t < stroke.events.back().t) {
      throw Error(ErrorKind::invalid_value, "timestamps decrease within a stroke");
    }
    stroke.events.push_back(e);
  }
  if (by_finger.empty()) throw Error(ErrorKind::malformed_input, "sample has no events");
  if (by_finger.size() > kMaxFingers) {
    throw Error(ErrorKind::invalid_value, "more than 5 distinct fingers");
  }

  GestureSample sample{std::move(sample_id), std::move(device), {}};
  for (auto& [id, stroke] : by_finger) {
    if (stroke.size() < 2) throw Error(ErrorKind::too_short, "stroke has fewer than 2 events");
    sample.strokes.push_back(std::move(stroke));
  }
  std::sort(sample.strokes.begin(), sample.strokes.end(), stroke_before);
  return sample;
}

void validate_sample(const GestureSample& sample) {
  if (sample.strokes.empty()) throw Error(ErrorKind::malformed_input, "sample has no strokes");
  if (sample.strokes.size() > kMaxFingers) {
    throw Error(ErrorKind::invalid_value, "more than 5 distinct fingers");
  }
  for (std::size_t i = 0; i < sample.strokes.size(); ++i) {
    const auto& stroke = sample.strokes[i];
    if (stroke.size() < 2) throw Error(ErrorKind::too_short, "stroke has fewer than 2 events");
    for (std::size_t j = 0; j < stroke.size(); ++j) {
      const auto& e = stroke.events[j];
      check_event(e);
      if (e.finger_id != stroke.finger_id) {
        throw Error(ErrorKind::invalid_value, "event finger id differs from its stroke");
      }
      if (j > 0 && e.t < stroke.events[j - 1].t) {
        throw Error(ErrorKind::invalid_value, "timestamps decrease within a stroke");
      }
    }
    if (i > 0) {
      const auto& prev = sample.strokes[i - 1];
      if (prev.finger_id == stroke.finger_id) {
        throw Error(ErrorKind::invalid_value, "duplicate finger id across strokes");
      }
      if (!stroke_before(prev, stroke)) {
        throw Error(ErrorKind::invalid_value, "strokes not ordered by first touch");
      }
    }
  }
}

GestureSample parse_sample(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorKind::malformed_input, "trace document is not valid JSON");
  return sample_from_json(doc);
}

std::string serialize_sample(const GestureSample& sample) { return sample_to_json(sample).dump(); }

SampleCorpus parse_corpus(std::string_view text) {
  SampleCorpus corpus;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      throw Error(ErrorKind::malformed_input, "corpus line " + std::to_string(line_no) + " is not valid JSON");
    }
    corpus.samples.push_back(sample_from_json(doc));
    corpus.labels.push_back(doc.value("label", std::string{}));
  }

  std::vector<std::string> ids;
  for (const auto& s : corpus.samples) ids.push_back(s.sample_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorKind::invalid_value, "duplicate sample_id in corpus");
  }
  return corpus;
}

std::string serialize_corpus(const SampleCorpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    json doc = sample_to_json(corpus.samples[i]);
    if (i < corpus.labels.size()) doc["label"] = corpus.labels[i];
    out += doc.dump();
    out += '\n';
  }
  return out;
}

GestureSample load_sample(const std::string& path) { return parse_sample(read_file(path)); }

void save_sample(const std::string& path, const GestureSample& sample) {
  write_file(path, serialize_sample(sample) + "\n");
}

SampleCorpus load_corpus(const std::string& path) { return parse_corpus(read_file(path)); }

void save_corpus(const std::string& path, const SampleCorpus& corpus) {
  write_file(path, serialize_corpus(corpus));
}

std::vector<GestureSample> load_sample_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorKind::not_found, "not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<GestureSample> samples;
  for (const auto& f : files) samples.push_back(load_sample(f.string()));
  return samples;
}

}  // namespace gestauth
