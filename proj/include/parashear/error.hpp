#pragma once

#include <stdexcept>
#include <string>

namespace parashear {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteEntries : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The matrix exponential was asked for an argument beyond the configured cap.
class ExpmOverflow : public Error {
 public:
  using Error::Error;
};

class DependentBasis : public Error {
 public:
  using Error::Error;
};

class NotNilpotent : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class NoQualifyingChain : public Error {
 public:
  using Error::Error;
};

class WindowOutOfRange : public Error {
 public:
  using Error::Error;
};

class OutOfChart : public Error {
 public:
  using Error::Error;
};

/// A first-crossing search exhausted its range. The message carries the
/// certificate (which bound held, which precondition failed).
class NoCrossing : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  NotFound(const std::string& what, double max_reached)
      : Error(what), max_reached_(max_reached) {}
  double max_reached() const noexcept { return max_reached_; }

 private:
  double max_reached_;
};

class WindowFail : public Error {
 public:
  WindowFail(const std::string& what, double L, double fraction)
      : Error(what), L_(L), fraction_(fraction) {}
  double L() const noexcept { return L_; }
  double fraction() const noexcept { return fraction_; }

 private:
  double L_;
  double fraction_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace parashear
