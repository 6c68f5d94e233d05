#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tptg {

/// Caller passed something invalid (bad index, unknown clock or player).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource limit (state count, enumeration size) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  std::string code;  // short machine-readable tag, e.g. "partition"
  std::string message;

  bool is_error() const { return severity == Severity::Error; }
};

inline std::size_t count_errors(const std::vector<Diagnostic>& diags) {
  std::size_t n = 0;
  for (const auto& d : diags) n += d.is_error() ? 1 : 0;
  return n;
}

/// A model failed validation; carries the full diagnostic list.
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& what, std::vector<Diagnostic> diags = {})
      : std::runtime_error(what), diagnostics_(std::move(diags)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace tptg
