#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace robustiso {

/// Root of all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (size mismatch, out of range
/// vertex, nonpositive epsilon, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A configured cap or work budget would be exceeded.
class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

/// A randomized construction failed its exact post-check on every retry.
class VerificationFailed : public Error {
  public:
    using Error::Error;
};

/// A postcondition the library guarantees did not hold. Always a bug.
class InternalError : public Error {
  public:
    using Error::Error;
};

}  // namespace robustiso
