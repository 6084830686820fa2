#pragma once

#include <stdexcept>
#include <string>

namespace nagata {

// Raised when an argument lies outside the domain of an operation
// (infinity under a planar metric, coincident points, c >= 1/2, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a requested accuracy or construction cannot be delivered
// with the information available (missing tail bound, too many terms).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// A constructive step produced an object that violates its own invariant.
class ConstructionError : public std::logic_error {
 public:
  explicit ConstructionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace nagata
