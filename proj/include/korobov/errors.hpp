#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace korobov {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (range, ordering, sign).
class precondition_error : public error {
 public:
  using error::error;
};

/// A frequency or point has the wrong number of coordinates.
class dimension_mismatch : public precondition_error {
 public:
  dimension_mismatch(std::size_t expected, std::size_t got)
      : precondition_error("dimension mismatch: expected " + std::to_string(expected) +
                           " coordinates, got " + std::to_string(got)) {}
};

/// A configurable work limit was hit before a result could be certified.
/// `reached` is the largest index (or count) known not to satisfy the query.
class resource_cap_exceeded : public error {
 public:
  resource_cap_exceeded(const std::string& what, std::size_t reached = 0)
      : error(what), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

/// A numerical result could not be certified to the requested tolerance.
class certification_failure : public error {
 public:
  using error::error;
};

/// The dense kernel matrix could not be factorized.
class gram_conditioning_error : public certification_failure {
 public:
  gram_conditioning_error(const std::string& what, double rcond)
      : certification_failure(what + " (reciprocal condition estimate " + std::to_string(rcond) + ")"),
        rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

namespace detail {
inline void require(bool ok, const char* message) {
  if (!ok) throw precondition_error(message);
}
}  // namespace detail

}  // namespace korobov
