#include "gestauth/service/server.hpp"

#include <iostream>

#include "gestauth/error.hpp"
#include "gestauth/eval/synth.hpp"
#include "httplib.h"

namespace gestauth::service {

using nlohmann::json;

namespace {

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::training_diverged: return 500;
    default: return 400;
  }
}

Response error_response(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::vector<GestureSample> samples_from(const json& arr, const char* what) {
  if (!arr.is_array()) throw Error(ErrorKind::malformed_input, std::string(what) + " must be an array");
  std::vector<GestureSample> out;
  for (const auto& doc : arr) out.push_back(parse_sample(doc.dump()));
  return out;
}

template <typename Fn>
Response guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return error_response(status_for(e.kind()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

}  // namespace

json decision_to_json(const Decision& d) {
  json curves = json::array();
  for (const auto& c : d.curve_test) curves.push_back({{"position", c.position}, {"score", c.score}, {"passed", c.passed}});
  json hand = nullptr;
  if (d.hand_geometry_test) {
    hand = json::array();
    for (const auto& p : *d.hand_geometry_test) {
      hand.push_back({{"first", p.first}, {"second", p.second}, {"distance", p.distance}, {"passed", p.passed}});
    }
  }
  return {{"accepted", d.accepted},
          {"reason", std::string(to_string(d.reason))},
          {"score", d.score()},
          {"curve_test", curves},
          {"hand_geometry_test", hand},
          {"detail", d.detail}};
}

json meta_to_json(const TemplateMeta& m) {
  return {{"user_id", m.user_id},
          {"version", m.version},
          {"finger_count", m.finger_count},
          {"omega", m.omega},
          {"created_at", m.created_at},
          {"failed_attempts", m.failed_attempts},
          {"locked", m.locked},
          {"max_failed_attempts", m.max_failed_attempts}};
}

json outcome_to_json(const VerifyOutcome& o) {
  json j = o.decision ? decision_to_json(*o.decision) : json::object();
  if (!o.decision) {
    j["accepted"] = false;
    j["reason"] = "locked";
  }
  j["status"] = o.status == VerifyStatus::accepted ? "accepted" : o.status == VerifyStatus::rejected ? "rejected" : "locked";
  j["failed_attempts"] = o.failed_attempts;
  j["locked"] = o.locked;
  return j;
}

Service::Service(TemplateStore& store, ServiceOptions options) : store_(store), options_(std::move(options)) {}

Response Service::enroll(const std::string& user_id, const std::string& body) {
  return guarded([&]() -> Response {
    const json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorKind::malformed_input, "request body is not valid JSON");
    std::vector<GestureSample> samples, decoys;
    EnrollConfig cfg = options_.enroll;
    std::string token;
    if (doc.is_array()) {
      samples = samples_from(doc, "samples");
    } else if (doc.is_object()) {
      if (!doc.contains("samples")) throw Error(ErrorKind::malformed_input, "missing samples");
      samples = samples_from(doc.at("samples"), "samples");
      if (doc.contains("decoys")) decoys = samples_from(doc.at("decoys"), "decoys");
      if (doc.contains("config")) cfg = apply_enroll_overrides(cfg, doc.at("config").dump());
      if (doc.contains("request_token")) {
        if (!doc.at("request_token").is_string()) throw Error(ErrorKind::malformed_input, "request_token must be a string");
        token = doc.at("request_token").get<std::string>();
      }
    } else {
      throw Error(ErrorKind::malformed_input, "request body must be an object or an array");
    }
    if (samples.empty()) throw Error(ErrorKind::invalid_value, "no enrollment samples");
    if (decoys.empty()) {
      decoys = eval::synth_decoys(static_cast<int>(samples.front().finger_count()), options_.synthetic_decoys,
                                  options_.decoy_seed);
    }
    const EnrollOutcome outcome = store_.enroll(user_id, samples, decoys, cfg, token);
    json out = meta_to_json(outcome.meta);
    out["created"] = outcome.created;
    return {outcome.created ? 201 : 200, out};
  });
}

Response Service::verify(const std::string& user_id, const std::string& body) {
  return guarded([&]() -> Response {
    const json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw Error(ErrorKind::malformed_input, "request body is not a JSON object");
    std::optional<double> threshold;
    GestureSample sample;
    if (doc.contains("sample")) {
      sample = parse_sample(doc.at("sample").dump());
      if (doc.contains("threshold")) threshold = doc.at("threshold").get<double>();
    } else {
      sample = parse_sample(body);
    }
    if (!store_.contains(user_id)) throw Error(ErrorKind::not_found, "unknown user");
    const VerifyOutcome o = store_.verify(user_id, sample, threshold);
    return {o.status == VerifyStatus::locked ? 423 : 200, outcome_to_json(o)};
  });
}

Response Service::meta(const std::string& user_id) {
  return guarded([&]() -> Response { return {200, meta_to_json(store_.meta(user_id))}; });
}

Response Service::remove(const std::string& user_id) {
  return guarded([&]() -> Response {
    if (!store_.remove(user_id)) throw Error(ErrorKind::not_found, "unknown user");
    return {200, {{"deleted", user_id}}};
  });
}

void install_routes(httplib::Server& server, Service& service) {
  auto reply = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Post(R"(/users/([^/]+)/enroll)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.enroll(httplib::detail::decode_url(req.matches[1], false), req.body));
  });
  server.Post(R"(/users/([^/]+)/verify)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.verify(httplib::detail::decode_url(req.matches[1], false), req.body));
  });
  server.Get(R"(/users/([^/]+)/template/meta)", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.meta(httplib::detail::decode_url(req.matches[1], false)));
  });
  server.Delete(R"(/users/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.remove(httplib::detail::decode_url(req.matches[1], false)));
  });
}

int serve(const std::string& host, int port, TemplateStore& store, ServiceOptions options) {
  Service service(store, std::move(options));
  httplib::Server server;
  install_routes(server, service);
  std::cerr << "listening on " << host << ":" << port << ", store " << store.root().string() << "\n";
  return server.listen(host, port) ? 0 : 1;
}

}  // namespace gestauth::service
