#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gestauth/trace.hpp"

namespace testing_support {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path data_dir() { return GESTAUTH_TEST_DATA; }

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("gestauth-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Wobbly open arc, one finger.
inline std::vector<gestauth::TouchEvent> arc_events(int finger, double cx, double cy, int n, double phase,
                                                    std::int64_t t0 = 0) {
  std::vector<gestauth::TouchEvent> out;
  for (int j = 0; j < n; ++j) {
    const double u = static_cast<double>(j) / (n - 1);
    gestauth::TouchEvent e;
    e.finger_id = finger;
    e.x = cx + 150.0 * std::cos(2.5 * u + phase) + 20.0 * u;
    e.y = cy + 90.0 * std::sin(2.5 * u + phase) + 10.0 * std::sin(7.0 * u);
    e.t = t0 + 16 * j + (j % 3);
    e.pressure = 0.4 + 0.2 * std::sin(3.0 * u);
    e.size = 0.3;
    out.push_back(e);
  }
  return out;
}

inline gestauth::GestureSample arc_sample(const std::string& id, int fingers = 1, int n = 40, double phase = 0.0) {
  std::vector<gestauth::TouchEvent> events;
  for (int f = 0; f < fingers; ++f) {
    auto e = arc_events(f, 300.0 + 80.0 * f, 500.0 + 25.0 * f * f, n, phase, 5 * f);
    events.insert(events.end(), e.begin(), e.end());
  }
  return gestauth::assemble_sample(id, "test", events);
}

// Rotation by `angle` about the origin, then translation.
inline gestauth::GestureSample rigid_copy(const gestauth::GestureSample& s, double angle, double tx, double ty) {
  gestauth::GestureSample out = s;
  const double c = std::cos(angle), sn = std::sin(angle);
  for (auto& stroke : out.strokes) {
    for (auto& e : stroke.events) {
      const double x = e.x, y = e.y;
      e.x = c * x - sn * y + tx;
      e.y = sn * x + c * y + ty;
    }
  }
  return out;
}

}  // namespace testing_support
