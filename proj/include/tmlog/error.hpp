#pragma once

#include <stdexcept>
#include <string>

namespace tmlog {

enum class ErrorKind {
  invalid_argument,
  unsupported_input,
  ill_conditioned_point,
  overflow,
  stall,
  undefined_multiplier,
  range,
  degenerate_fit,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace tmlog
