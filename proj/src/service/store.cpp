#include "gestauth/service/store.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gestauth/error.hpp"
#include "json.hpp"

namespace gestauth::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temporary and rename over the target.
void write_atomic(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::not_found, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::not_found, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::int64_t now_seconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

void check_user_id(const std::string& user_id) {
  if (user_id.empty() || user_id.size() > 256) throw Error(ErrorKind::invalid_value, "user id must be 1..256 bytes");
}

TemplateMeta make_meta(const std::string& user_id, const AuthTemplate& tmpl, const UserState& s) {
  TemplateMeta m;
  m.user_id = user_id;
  m.version = tmpl.version;
  m.finger_count = tmpl.finger_count;
  m.omega = tmpl.enrolled_samples;
  m.created_at = s.created_at;
  m.failed_attempts = s.failed_attempts;
  m.locked = s.locked;
  m.max_failed_attempts = tmpl.max_failed_attempts;
  return m;
}

}  // namespace

std::string encode_user_id(const std::string& user_id) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(user_id.size() * 2);
  for (const unsigned char c : user_id) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 0xF]);
  }
  return out;
}

TemplateStore::TemplateStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "users", ec);
  if (ec) throw Error(ErrorKind::not_found, "cannot create template store at " + root_.string());
}

fs::path TemplateStore::default_root() {
  if (const char* env = std::getenv("GESTAUTH_STORE"); env != nullptr && *env != '\0') return env;
  return "gestauth-store";
}

fs::path TemplateStore::user_dir(const std::string& user_id) const {
  check_user_id(user_id);
  return root_ / "users" / encode_user_id(user_id);
}

std::shared_ptr<std::mutex> TemplateStore::user_mutex(const std::string& user_id) const {
  std::lock_guard lock(registry_mutex_);
  auto& slot = user_mutexes_[user_id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

void TemplateStore::write_state(const std::string& user_id, const UserState& s) const {
  const json j = {{"failed_attempts", s.failed_attempts},
                  {"locked", s.locked},
                  {"created_at", s.created_at},
                  {"request_token", s.request_token}};
  write_atomic(user_dir(user_id) / "state.json", j.dump(2) + "\n");
}

std::optional<UserState> TemplateStore::read_state(const std::string& user_id) const {
  const fs::path path = user_dir(user_id) / "state.json";
  if (!fs::exists(path)) return std::nullopt;
  const json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorKind::malformed_input, "corrupt state file for user");
  UserState s;
  try {
    s.failed_attempts = j.at("failed_attempts").get<int>();
    s.locked = j.at("locked").get<bool>();
    s.created_at = j.at("created_at").get<std::int64_t>();
    s.request_token = j.value("request_token", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::malformed_input, std::string("corrupt state file: ") + e.what());
  }
  return s;
}

void TemplateStore::index_add(const std::string& user_id) {
  std::lock_guard lock(index_mutex_);
  const fs::path path = root_ / "index.json";
  json index = json::object();
  if (fs::exists(path)) {
    index = json::parse(read_file(path), nullptr, false);
    if (index.is_discarded() || !index.is_object()) index = json::object();
  }
  index[user_id] = encode_user_id(user_id);
  write_atomic(path, index.dump(2) + "\n");
}

void TemplateStore::index_remove(const std::string& user_id) {
  std::lock_guard lock(index_mutex_);
  const fs::path path = root_ / "index.json";
  if (!fs::exists(path)) return;
  json index = json::parse(read_file(path), nullptr, false);
  if (index.is_discarded() || !index.is_object()) index = json::object();
  index.erase(user_id);
  write_atomic(path, index.dump(2) + "\n");
}

EnrollOutcome TemplateStore::put(const std::string& user_id, const AuthTemplate& tmpl,
                                 const std::string& request_token) {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  if (!request_token.empty()) {
    const auto state = read_state(user_id);
    if (state && state->request_token == request_token && fs::exists(user_dir(user_id) / "template.json")) {
      return {false, make_meta(user_id, load_template((user_dir(user_id) / "template.json").string()), *state)};
    }
  }
  UserState s;
  s.created_at = now_seconds();
  s.request_token = request_token;
  write_atomic(user_dir(user_id) / "template.json", serialize_template(tmpl));
  write_state(user_id, s);
  index_add(user_id);
  return {true, make_meta(user_id, tmpl, s)};
}

EnrollOutcome TemplateStore::enroll(const std::string& user_id, std::span<const GestureSample> samples,
                                    std::span<const GestureSample> decoys, const EnrollConfig& cfg,
                                    const std::string& request_token) {
  if (!request_token.empty()) {
    const auto mutex = user_mutex(user_id);
    std::lock_guard lock(*mutex);
    const auto state = read_state(user_id);
    if (state && state->request_token == request_token && fs::exists(user_dir(user_id) / "template.json")) {
      return {false, make_meta(user_id, load_template((user_dir(user_id) / "template.json").string()), *state)};
    }
  }
  // Training runs outside the lock; put() re-checks the token.
  return put(user_id, gestauth::enroll(samples, decoys, cfg), request_token);
}

std::optional<UserRecord> TemplateStore::get(const std::string& user_id) const {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  const fs::path path = user_dir(user_id) / "template.json";
  if (!fs::exists(path)) return std::nullopt;
  UserRecord r;
  r.user_id = user_id;
  r.tmpl = load_template(path.string());
  r.state = read_state(user_id).value_or(UserState{});
  return r;
}

bool TemplateStore::contains(const std::string& user_id) const {
  return fs::exists(user_dir(user_id) / "template.json");
}

TemplateMeta TemplateStore::meta(const std::string& user_id) const {
  const auto record = get(user_id);
  if (!record) throw Error(ErrorKind::not_found, "unknown user");
  return make_meta(user_id, record->tmpl, record->state);
}

VerifyOutcome TemplateStore::account(const std::string& user_id, const AuthTemplate& tmpl,
                                     const GestureSample& sample, std::optional<double> threshold) {
  UserState s = read_state(user_id).value_or(UserState{});
  VerifyOutcome out;
  if (s.locked) {
    out.status = VerifyStatus::locked;
    out.failed_attempts = s.failed_attempts;
    out.locked = true;
    return out;
  }
  out.decision = gestauth::verify(sample, tmpl, threshold);
  if (out.decision->accepted) {
    s.failed_attempts = 0;
    out.status = VerifyStatus::accepted;
  } else {
    ++s.failed_attempts;
    s.locked = s.failed_attempts >= tmpl.max_failed_attempts;
    out.status = VerifyStatus::rejected;
  }
  write_state(user_id, s);
  out.failed_attempts = s.failed_attempts;
  out.locked = s.locked;
  return out;
}

VerifyOutcome TemplateStore::verify(const std::string& user_id, const GestureSample& sample,
                                    std::optional<double> threshold) {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  const fs::path path = user_dir(user_id) / "template.json";
  if (!fs::exists(path)) throw Error(ErrorKind::not_found, "unknown user");
  return account(user_id, load_template(path.string()), sample, threshold);
}

VerifyOutcome TemplateStore::verify_with(const std::string& user_id, const AuthTemplate& tmpl,
                                         const GestureSample& sample, std::optional<double> threshold) {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  return account(user_id, tmpl, sample, threshold);
}

UserState TemplateStore::state(const std::string& user_id) const {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  return read_state(user_id).value_or(UserState{});
}

void TemplateStore::unlock(const std::string& user_id) {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  auto s = read_state(user_id);
  if (!s) throw Error(ErrorKind::not_found, "unknown user");
  s->failed_attempts = 0;
  s->locked = false;
  write_state(user_id, *s);
}

bool TemplateStore::remove(const std::string& user_id) {
  const auto mutex = user_mutex(user_id);
  std::lock_guard lock(*mutex);
  const fs::path dir = user_dir(user_id);
  if (!fs::exists(dir)) return false;
  fs::remove_all(dir);
  index_remove(user_id);
  return true;
}

std::vector<std::string> TemplateStore::users() const {
  std::vector<std::string> out;
  const fs::path path = root_ / "index.json";
  if (!fs::exists(path)) return out;
  const json index = json::parse(read_file(path), nullptr, false);
  if (index.is_discarded() || !index.is_object()) return out;
  for (auto it = index.begin(); it != index.end(); ++it) out.push_back(it.key());
  return out;
}

}  // namespace gestauth::service
