#pragma once

#include <stdexcept>
#include <string>

namespace gfb {

enum class errc {
  invalid_argument,
  dimension_mismatch,
  non_diagonalizable,
  eigen_failure,
  not_normal,
  too_large,
  zero_matrix,
  io_error,
};

/// Library exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace gfb
