#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cutloc {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownFunction : public Error {
 public:
  UnknownFunction(std::size_t offset, const std::string& name)
      : Error("unknown function '" + name + "' at offset " + std::to_string(offset)),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArityMismatch : public Error {
 public:
  ArityMismatch(std::size_t offset, const std::string& name, std::size_t got)
      : Error("function '" + name + "' takes 1 argument, got " + std::to_string(got) +
              " at offset " + std::to_string(offset)) {}
};

/// Evaluation left the domain of a primitive (sqrt/log of a bad argument,
/// division by zero, overflow).
class EvaluationDomainError : public Error {
 public:
  EvaluationDomainError(double t, const std::string& what)
      : Error("evaluation domain error at t=" + format(t) + ": " + what), t_(t) {}
  double t() const { return t_; }

 private:
  static std::string format(double t);
  double t_;
};

/// The jet overflowed (or lost all digits) without any primitive leaving its domain.
class NonFiniteResult : public EvaluationDomainError {
 public:
  explicit NonFiniteResult(double t) : EvaluationDomainError(t, "non-finite result") {}
};

class NotPositive : public Error {
 public:
  explicit NotPositive(double t);
  double t() const { return t_; }

 private:
  double t_;
};

class NotEven : public Error {
 public:
  explicit NotEven(double t);
  double t() const { return t_; }

 private:
  double t_;
};

class DegenerateAtZero : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class StepFailure : public Error {
 public:
  using Error::Error;
};

class NoReturn : public Error {
 public:
  using Error::Error;
};

class QuadratureStall : public Error {
 public:
  using Error::Error;
};

class HypothesesNotVerified : public Error {
 public:
  using Error::Error;
};

class NoHit : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

}  // namespace cutloc
