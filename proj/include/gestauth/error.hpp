#pragma once

#include <stdexcept>
#include <string>

namespace gestauth {

enum class ErrorKind {
  malformed_input,
  invalid_value,
  too_short,
  degenerate_geometry,
  training_diverged,
  unsupported_version,
  not_found,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gestauth
