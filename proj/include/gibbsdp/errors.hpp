#ifndef GIBBSDP_ERRORS_HPP
#define GIBBSDP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gibbsdp {

// Raised when a computation degrades numerically (catastrophic cancellation,
// quadrature that cannot reach its tolerance, rejection loops that stall).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an adaptive-rejection envelope cannot be constructed.
class envelope_error : public numeric_error {
 public:
  explicit envelope_error(const std::string& what) : numeric_error(what) {}
};

}  // namespace gibbsdp

#endif
