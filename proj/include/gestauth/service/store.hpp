#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gestauth/authenticator.hpp"

namespace gestauth::service {

/// Lockout bookkeeping kept next to a user's template.
struct UserState {
  int failed_attempts = 0;
  bool locked = false;
  std::int64_t created_at = 0;  // unix seconds
  std::string request_token;    // token of the enrollment that produced the template

  bool operator==(const UserState&) const = default;
};

struct UserRecord {
  std::string user_id;
  AuthTemplate tmpl;
  UserState state;
};

/// Non-secret view of a record.
struct TemplateMeta {
  std::string user_id;
  int version = kTemplateVersion;
  int finger_count = 1;
  int omega = 0;
  std::int64_t created_at = 0;
  int failed_attempts = 0;
  bool locked = false;
  int max_failed_attempts = 5;
};

enum class VerifyStatus { accepted, rejected, locked };

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::rejected;
  std::optional<Decision> decision;  // empty when locked
  int failed_attempts = 0;
  bool locked = false;
};

struct EnrollOutcome {
  bool created = true;  // false when the request token was already applied
  TemplateMeta meta;
};

/// Directory-backed template store:
///   <root>/index.json                 user id -> directory
///   <root>/users/<hex id>/template.json
///   <root>/users/<hex id>/state.json
/// Requests for one user are serialized; different users proceed in
/// parallel. Files are replaced atomically.
class TemplateStore {
 public:
  explicit TemplateStore(std::filesystem::path root);

  /// GESTAUTH_STORE if set, otherwise ./gestauth-store.
  static std::filesystem::path default_root();

  const std::filesystem::path& root() const { return root_; }

  /// Stores a template. A repeated non-empty request_token for the same user
  /// leaves the stored record untouched.
  EnrollOutcome put(const std::string& user_id, const AuthTemplate& tmpl, const std::string& request_token = "");

  /// Runs enrollment under the user's lock unless request_token was already
  /// applied.
  EnrollOutcome enroll(const std::string& user_id, std::span<const GestureSample> samples,
                       std::span<const GestureSample> decoys, const EnrollConfig& cfg,
                       const std::string& request_token = "");

  std::optional<UserRecord> get(const std::string& user_id) const;
  bool contains(const std::string& user_id) const;
  TemplateMeta meta(const std::string& user_id) const;  // not_found when absent

  /// Verifies against the stored template with lockout accounting.
  VerifyOutcome verify(const std::string& user_id, const GestureSample& sample,
                       std::optional<double> threshold = std::nullopt);

  /// Same accounting against an externally supplied template. The lockout
  /// state is created on first use if the user has no stored record.
  VerifyOutcome verify_with(const std::string& user_id, const AuthTemplate& tmpl, const GestureSample& sample,
                            std::optional<double> threshold = std::nullopt);

  UserState state(const std::string& user_id) const;  // default state when absent
  void unlock(const std::string& user_id);
  bool remove(const std::string& user_id);
  std::vector<std::string> users() const;

 private:
  std::filesystem::path user_dir(const std::string& user_id) const;
  std::shared_ptr<std::mutex> user_mutex(const std::string& user_id) const;
  void write_state(const std::string& user_id, const UserState& s) const;
  std::optional<UserState> read_state(const std::string& user_id) const;
  void index_add(const std::string& user_id);
  void index_remove(const std::string& user_id);
  VerifyOutcome account(const std::string& user_id, const AuthTemplate& tmpl, const GestureSample& sample,
                        std::optional<double> threshold);

  std::filesystem::path root_;
  mutable std::mutex registry_mutex_;
  mutable std::map<std::string, std::shared_ptr<std::mutex>> user_mutexes_;
  std::mutex index_mutex_;
};

/// Hex encoding used for user directory names.
std::string encode_user_id(const std::string& user_id);

}  // namespace gestauth::service
