#pragma once

#include <stdexcept>
#include <string>

namespace mirage {

// Argument outside the validated domain of a numerical kernel.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A numerical routine failed to converge or produced an unusable result.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root search found fewer roots than requested.
struct NotFoundError : std::runtime_error {
  NotFoundError(const std::string& what, int located)
      : std::runtime_error(what), located(located) {}
  int located;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; line is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line(line) {}
  std::size_t line;
};

}  // namespace mirage
