#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hardy {

/// Point or symbol outside the open domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Synthesis requested with too few samples for the nonzero band.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (image outside codomain,
/// non-contracting regime, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input the artifact deliberately does not handle (e.g. w vanishing on the grid).
class UnsupportedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system that should be regular turned out singular.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration did not reach its tolerance; carries the per-iterate
/// update norms so the caller can see whether it stalled or diverged.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace hardy
