#pragma once

#include <cstdint>
#include <string>

#include "gestauth/service/store.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace gestauth::service {

nlohmann::json decision_to_json(const Decision& d);
nlohmann::json meta_to_json(const TemplateMeta& m);
nlohmann::json outcome_to_json(const VerifyOutcome& o);

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  int synthetic_decoys = 50;  // used when an enroll request brings no decoys
  std::uint64_t decoy_seed = 7;
  EnrollConfig enroll;
};

/// Request handlers, independent of the transport. Bodies mirror the file
/// formats: samples are trace documents, templates never leave the store.
class Service {
 public:
  Service(TemplateStore& store, ServiceOptions options = {});

  /// Body: {"samples": [trace...], "decoys": [trace...]?, "config": {...}?,
  /// "request_token": "..."?} or a bare array of traces.
  Response enroll(const std::string& user_id, const std::string& body);
  /// Body: one trace document, or {"sample": trace, "threshold": t}.
  Response verify(const std::string& user_id, const std::string& body);
  Response meta(const std::string& user_id);
  Response remove(const std::string& user_id);

 private:
  TemplateStore& store_;
  ServiceOptions options_;
};

/// Registers the routes on `server`:
///   POST /users/{id}/enroll, POST /users/{id}/verify,
///   GET /users/{id}/template/meta, DELETE /users/{id}
void install_routes(httplib::Server& server, Service& service);

/// Blocks serving on host:port until the process is stopped.
int serve(const std::string& host, int port, TemplateStore& store, ServiceOptions options = {});

}  // namespace gestauth::service
