#include <fstream>
#include <sstream>

#include "gestauth/authenticator.hpp"
#include "json.hpp"

namespace gestauth {

using nlohmann::json;

namespace {

template <typename Derived>
json to_array(const Eigen::MatrixBase<Derived>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

template <typename Vec>
Vec from_array(const json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::malformed_input, "expected numeric array");
  if constexpr (Vec::SizeAtCompileTime != Eigen::Dynamic) {
    if (arr.size() != static_cast<std::size_t>(Vec::SizeAtCompileTime)) {
      throw Error(ErrorKind::malformed_input, "numeric array has the wrong length");
    }
  }
  Vec v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

std::string_view frame_name(HandGeometryFrame f) {
  return f == HandGeometryFrame::adjusted ? "adjusted" : "normalized";
}

HandGeometryFrame frame_from(const std::string& s) {
  if (s == "adjusted") return HandGeometryFrame::adjusted;
  if (s == "normalized") return HandGeometryFrame::normalized;
  throw Error(ErrorKind::malformed_input, "unknown hand geometry frame: " + s);
}

json config_to_json(const EnrollConfig& c) {
  json adjust = {{"eta_s", c.adjust.eta_s}, {"eta_e", c.adjust.eta_e}, {"xi_fraction", c.adjust.xi_fraction}};
  adjust["xi"] = c.adjust.xi ? json(*c.adjust.xi) : json(nullptr);
  return {
      {"adjust", adjust},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"max_iterations", c.train.max_iterations},
        {"rel_tolerance", c.train.rel_tolerance},
        {"seed", c.train.seed},
        {"standardize", c.train.standardize}}},
      {"reference",
       {{"kind", c.reference.kind == ReferenceStrategy::Kind::medoid ? "medoid" : "random"},
        {"seed", c.reference.seed}}},
      {"references_per_position", c.references_per_position},
      {"threshold", c.threshold},
      {"hand_slack", c.hand_slack},
      {"hand_frame", frame_name(c.hand_frame)},
      {"max_failed_attempts", c.max_failed_attempts},
  };
}

EnrollConfig config_from_json(const json& j) {
  EnrollConfig c;
  const auto& a = j.at("adjust");
  c.adjust.eta_s = a.at("eta_s").get<int>();
  c.adjust.eta_e = a.at("eta_e").get<int>();
  c.adjust.xi_fraction = a.at("xi_fraction").get<double>();
  if (!a.at("xi").is_null()) c.adjust.xi = a.at("xi").get<double>();
  const auto& t = j.at("train");
  c.train.learning_rate = t.at("learning_rate").get<double>();
  c.train.max_iterations = t.at("max_iterations").get<int>();
  c.train.rel_tolerance = t.at("rel_tolerance").get<double>();
  c.train.seed = t.at("seed").get<std::uint64_t>();
  c.train.standardize = t.at("standardize").get<bool>();
  const auto& r = j.at("reference");
  const auto kind = r.at("kind").get<std::string>();
  if (kind == "medoid") {
    c.reference.kind = ReferenceStrategy::Kind::medoid;
  } else if (kind == "random") {
    c.reference.kind = ReferenceStrategy::Kind::random;
  } else {
    throw Error(ErrorKind::malformed_input, "unknown reference strategy: " + kind);
  }
  c.reference.seed = r.at("seed").get<std::uint64_t>();
  c.references_per_position = j.at("references_per_position").get<int>();
  c.threshold = j.at("threshold").get<double>();
  c.hand_slack = j.at("hand_slack").get<double>();
  c.hand_frame = frame_from(j.at("hand_frame").get<std::string>());
  c.max_failed_attempts = j.at("max_failed_attempts").get<int>();
  return c;
}

json features_to_json(const FeatureSeriesSet& f) {
  json out = json::object();
  for (int k = 0; k < kFeatureCount; ++k) {
    out[std::string(kFeatureNames[static_cast<std::size_t>(k)])] = to_array(f.series[static_cast<std::size_t>(k)]);
  }
  return out;
}

FeatureSeriesSet features_from_json(const json& j) {
  FeatureSeriesSet f;
  for (int k = 0; k < kFeatureCount; ++k) {
    f.series[static_cast<std::size_t>(k)] =
        from_array<Eigen::VectorXd>(j.at(std::string(kFeatureNames[static_cast<std::size_t>(k)])));
  }
  return f;
}

}  // namespace

EnrollConfig apply_enroll_overrides(EnrollConfig c, std::string_view json_object) {
  const json e = json::parse(json_object, nullptr, false);
  if (e.is_discarded() || !e.is_object()) throw Error(ErrorKind::malformed_input, "enroll config is not a JSON object");
  try {
    c.adjust.eta_s = e.value("eta_s", c.adjust.eta_s);
    c.adjust.eta_e = e.value("eta_e", c.adjust.eta_e);
    if (e.contains("xi")) {
      if (e.at("xi").is_null()) {
        c.adjust.xi.reset();
      } else {
        c.adjust.xi = e.at("xi").get<double>();
      }
    }
    c.adjust.xi_fraction = e.value("xi_fraction", c.adjust.xi_fraction);
    c.train.learning_rate = e.value("learning_rate", c.train.learning_rate);
    c.train.max_iterations = e.value("max_iterations", c.train.max_iterations);
    c.train.rel_tolerance = e.value("rel_tolerance", c.train.rel_tolerance);
    c.train.seed = e.value("train_seed", c.train.seed);
    c.train.standardize = e.value("standardize", c.train.standardize);
    if (e.contains("reference")) {
      const auto kind = e.at("reference").get<std::string>();
      if (kind == "medoid") {
        c.reference.kind = ReferenceStrategy::Kind::medoid;
      } else if (kind == "random") {
        c.reference.kind = ReferenceStrategy::Kind::random;
      } else {
        throw Error(ErrorKind::invalid_value, "reference must be medoid or random");
      }
    }
    c.reference.seed = e.value("reference_seed", c.reference.seed);
    c.references_per_position = e.value("references_per_position", c.references_per_position);
    c.threshold = e.value("threshold", c.threshold);
    c.hand_slack = e.value("hand_slack", c.hand_slack);
    if (e.contains("hand_frame")) c.hand_frame = frame_from(e.at("hand_frame").get<std::string>());
    c.max_failed_attempts = e.value("max_failed_attempts", c.max_failed_attempts);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::malformed_input, std::string("enroll config: ") + ex.what());
  }
  validate_enroll_config(c);
  return c;
}

void validate_enroll_config(const EnrollConfig& c) {
  if (c.adjust.eta_s < 1 || c.adjust.eta_e < 1) throw Error(ErrorKind::invalid_value, "eta must be at least 1");
  if (c.adjust.xi && !(*c.adjust.xi >= 0.0)) throw Error(ErrorKind::invalid_value, "xi must be non-negative");
  if (!(c.adjust.xi_fraction >= 0.0)) throw Error(ErrorKind::invalid_value, "xi_fraction must be non-negative");
  if (!(c.train.learning_rate > 0.0)) throw Error(ErrorKind::invalid_value, "learning_rate must be positive");
  if (c.train.max_iterations < 1) throw Error(ErrorKind::invalid_value, "max_iterations must be positive");
  if (!(c.train.rel_tolerance >= 0.0)) throw Error(ErrorKind::invalid_value, "rel_tolerance must be non-negative");
  if (c.references_per_position < 1) throw Error(ErrorKind::invalid_value, "references_per_position must be positive");
  if (!(c.threshold > 0.0 && c.threshold <= 1.0)) throw Error(ErrorKind::invalid_value, "threshold must be in (0, 1]");
  if (!(c.hand_slack >= 0.0)) throw Error(ErrorKind::invalid_value, "hand_slack must be non-negative");
  if (c.max_failed_attempts < 1) throw Error(ErrorKind::invalid_value, "max_failed_attempts must be positive");
}

std::string serialize_template(const AuthTemplate& tmpl) {
  json curves = json::array();
  for (const auto& c : tmpl.curves) {
    curves.push_back({
        {"position", c.position},
        {"threshold", c.threshold},
        {"weights", to_array(c.weights)},
        {"standardization",
         {{"enabled", c.standardization.enabled},
          {"mean", to_array(c.standardization.mean)},
          {"deviation", to_array(c.standardization.deviation)}}},
        {"reference_features", features_to_json(c.reference_features)},
    });
  }
  json hand = nullptr;
  if (tmpl.hand) {
    json intervals = json::array();
    for (const auto& iv : tmpl.hand->intervals) intervals.push_back({iv.lo, iv.hi});
    hand = {{"finger_count", tmpl.hand->finger_count}, {"slack", tmpl.hand->slack}, {"intervals", intervals}};
  }
  json doc = {
      {"version", tmpl.version},
      {"finger_count", tmpl.finger_count},
      {"enrolled_samples", tmpl.enrolled_samples},
      {"max_failed_attempts", tmpl.max_failed_attempts},
      {"config", config_to_json(tmpl.config)},
      {"curves", curves},
      {"hand_geometry", hand},
  };
  return doc.dump();
}

AuthTemplate parse_template(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorKind::malformed_input, "corrupt template document");
  try {
    AuthTemplate t;
    t.version = doc.at("version").get<int>();
    if (t.version != kTemplateVersion) {
      throw Error(ErrorKind::unsupported_version, "unsupported template version " + std::to_string(t.version));
    }
    t.finger_count = doc.at("finger_count").get<int>();
    if (t.finger_count < 1 || t.finger_count > static_cast<int>(kMaxFingers)) {
      throw Error(ErrorKind::malformed_input, "template finger count out of range");
    }
    t.enrolled_samples = doc.at("enrolled_samples").get<int>();
    t.max_failed_attempts = doc.at("max_failed_attempts").get<int>();
    t.config = config_from_json(doc.at("config"));
    for (const auto& c : doc.at("curves")) {
      CurveSubTemplate sub;
      sub.position = c.at("position").get<int>();
      sub.threshold = c.at("threshold").get<double>();
      sub.weights = from_array<WeightVector>(c.at("weights"));
      const auto& s = c.at("standardization");
      sub.standardization.enabled = s.at("enabled").get<bool>();
      sub.standardization.mean = from_array<FeatureStats>(s.at("mean"));
      sub.standardization.deviation = from_array<FeatureStats>(s.at("deviation"));
      sub.reference_features = features_from_json(c.at("reference_features"));
      if (sub.position < 1 || sub.position > t.finger_count) {
        throw Error(ErrorKind::malformed_input, "sub-template position out of range");
      }
      t.curves.push_back(std::move(sub));
    }
    for (int p = 1; p <= t.finger_count; ++p) {
      const bool present =
          std::any_of(t.curves.begin(), t.curves.end(), [p](const CurveSubTemplate& c) { return c.position == p; });
      if (!present) throw Error(ErrorKind::malformed_input, "missing sub-template for a finger position");
    }
    const auto& h = doc.at("hand_geometry");
    if (!h.is_null()) {
      HandGeomSubTemplate hand;
      hand.finger_count = h.at("finger_count").get<int>();
      hand.slack = h.at("slack").get<double>();
      for (const auto& iv : h.at("intervals")) hand.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
      if (hand.finger_count != t.finger_count ||
          hand.intervals.size() != HandGeometry::pairs(t.finger_count).size()) {
        throw Error(ErrorKind::malformed_input, "hand geometry does not match finger count");
      }
      t.hand = std::move(hand);
    }
    if (t.hand.has_value() != (t.finger_count >= 2)) {
      throw Error(ErrorKind::malformed_input, "hand geometry must be present iff finger count >= 2");
    }
    return t;
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::malformed_input, std::string("corrupt template document: ") + ex.what());
  }
}

AuthTemplate load_template(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_template(ss.str());
}

void save_template(const std::string& path, const AuthTemplate& tmpl) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::not_found, "cannot write " + path);
  out << serialize_template(tmpl) << '\n';
}

}  // namespace gestauth
