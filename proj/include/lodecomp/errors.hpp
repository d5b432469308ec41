#pragma once

#include <stdexcept>
#include <string>

namespace lodecomp {

/// Malformed input: bad dimensions, non-orthonormal bases, invalid partitions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation is well-defined only on a narrower class of inputs
/// (e.g. a fine-graining of two bipartite decompositions).
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A constructed result failed its own post-condition check. Carries a
/// rendered report of the failing checks.
class InternalConsistencyError : public std::runtime_error {
 public:
  InternalConsistencyError(const std::string& what, std::string report)
      : std::runtime_error(what), report_(std::move(report)) {}
  explicit InternalConsistencyError(const std::string& what)
      : std::runtime_error(what) {}

  const std::string& report() const noexcept { return report_; }

 private:
  std::string report_;
};

}  // namespace lodecomp
