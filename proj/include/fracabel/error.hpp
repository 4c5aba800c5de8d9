#pragma once

#include <stdexcept>
#include <string>

namespace fracabel {

// Argument outside an operation's domain (bad order, grid, height, ...).
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A computation that could not produce a result (non-arrival, no root).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const char* message) {
  if (!ok) throw DomainError(message);
}

inline void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace detail
}  // namespace fracabel
