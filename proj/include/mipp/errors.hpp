#pragma once

#include <stdexcept>
#include <string>

namespace mipp {

/// Raised when a truncated series or support cannot reach the requested
/// tolerance. Carries the bound that was actually achieved.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double achieved_bound)
      : std::runtime_error(what), achieved_bound_(achieved_bound) {}

  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

}  // namespace mipp
