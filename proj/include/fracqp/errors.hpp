#ifndef FRACQP_ERRORS_HPP
#define FRACQP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracqp {

// Raised on malformed or uncertifiable problem data (bad dimensions,
// non-orthonormal eigenvectors, nonpositive denominator, ...).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a requested exact engine is not applicable to the input.
class EngineError : public std::runtime_error {
public:
  explicit EngineError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fracqp

#endif
