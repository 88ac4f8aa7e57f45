#pragma once

#include <stdexcept>
#include <string>

namespace aif {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};
class SupportViolation : public Error {
 public:
  using Error::Error;
};
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};
class NonFiniteInput : public Error {
 public:
  using Error::Error;
};
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class IndexOutOfAlphabet : public Error {
 public:
  using Error::Error;
};
class HorizonTooLarge : public Error {
 public:
  using Error::Error;
};
class ZeroEvidence : public Error {
 public:
  using Error::Error;
};
class ModelZero : public Error {
 public:
  using Error::Error;
};
class NonDecreasingGuard : public Error {
 public:
  using Error::Error;
};
class DegenerateNormalizer : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised by the perception-action loop when the agent fails at a given step.
class StepError : public Error {
 public:
  StepError(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace aif
