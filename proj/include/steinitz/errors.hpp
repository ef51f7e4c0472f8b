#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace steinitz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class DivergentSeries : public Error {
 public:
  using Error::Error;
};

class ToleranceUnreachable : public Error {
 public:
  ToleranceUnreachable(const std::string& what, std::size_t required_terms)
      : Error(what), required_terms(required_terms) {}
  std::size_t required_terms;
};

// Which hypothesis of a finite solver failed.
enum class Precondition { zonotope, hs, ball, shape };

class PreconditionViolated : public Error {
 public:
  PreconditionViolated(Precondition kind, const std::string& what) : Error(what), kind(kind) {}
  Precondition kind;
};

class BoundMissed : public Error {
 public:
  using Error::Error;
};

class SearchExhausted : public Error {
 public:
  using Error::Error;
};

class NotInDomain : public Error {
 public:
  NotInDomain(const std::string& what, std::vector<double> functional)
      : Error(what), separating_functional(std::move(functional)) {}
  std::vector<double> separating_functional;
};

class StageFailure : public Error {
 public:
  StageFailure(std::size_t stage, const std::string& diagnostics)
      : Error("stage " + std::to_string(stage) + ": " + diagnostics), stage(stage) {}
  std::size_t stage;
};

class NotConditional : public Error {
 public:
  using Error::Error;
};

class UndecidableFamily : public Error {
 public:
  using Error::Error;
};

class ChainTooShort : public Error {
 public:
  using Error::Error;
};

class InsufficientDimension : public Error {
 public:
  using Error::Error;
};

class RepresentationInvalid : public Error {
 public:
  using Error::Error;
};

class CertificateReplayFailed : public Error {
 public:
  using Error::Error;
};

class EnumerationOverflow : public Error {
 public:
  EnumerationOverflow(const std::string& what, double partial_bound)
      : Error(what), partial_bound(partial_bound) {}
  double partial_bound;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace steinitz
