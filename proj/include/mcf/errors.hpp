#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcf {

// Machine-readable failure class, also used by the CLI for its exit diagnostics.
enum class ErrorCategory {
  kDomain,       // input outside the region where an operation is defined
  kBoundary,     // exact tie on a partition boundary
  kUnsupported,  // operation not available for this algorithm/model
  kNumeric,      // NaN/Inf or a failed numerical contract
  kUsage,
  kIo,
};

std::string_view category_name(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::kDomain, what) {}
};

class BoundaryError : public Error {
 public:
  explicit BoundaryError(const std::string& what) : Error(ErrorCategory::kBoundary, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorCategory::kUnsupported, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorCategory::kNumeric, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::kUsage, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

}  // namespace mcf
