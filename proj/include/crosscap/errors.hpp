#ifndef CROSSCAP_ERRORS_HPP
#define CROSSCAP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crosscap {

/// Machine-readable error categories.
enum class ErrorCode : int {
  usage = 1,
  not_generic = 2,
  not_immersion = 3,
  hypothesis_failure = 4,
  degenerate_form = 5,
  infinite_dimension = 6,
  boundary_hit = 7,
  numeric_failure = 8,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "usage";
    case ErrorCode::not_generic: return "not_generic";
    case ErrorCode::not_immersion: return "not_immersion";
    case ErrorCode::hypothesis_failure: return "hypothesis_failure";
    case ErrorCode::degenerate_form: return "degenerate_form";
    case ErrorCode::infinite_dimension: return "infinite_dimension";
    case ErrorCode::boundary_hit: return "boundary_hit";
    case ErrorCode::numeric_failure: return "numeric_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in polynomial text; `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(ErrorCode::usage, msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownVariable : public Error {
 public:
  UnknownVariable(const std::string& name, std::size_t position)
      : Error(ErrorCode::usage,
              "unknown variable '" + name + "' at position " + std::to_string(position)),
        name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Shape or index mismatch in an argument.
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& msg) : Error(ErrorCode::usage, msg) {}
};

/// The quotient algebra is infinite dimensional (the zero set is not finite).
class InfiniteDimension : public Error {
 public:
  explicit InfiniteDimension(const std::string& msg)
      : Error(ErrorCode::infinite_dimension, msg) {}
};

class HypothesisFailure : public Error {
 public:
  HypothesisFailure(const std::string& hypothesis, int retries)
      : Error(ErrorCode::hypothesis_failure,
              "hypothesis '" + hypothesis + "' failed after " + std::to_string(retries) +
                  " retries"),
        hypothesis_(hypothesis),
        retries_(retries) {}
  const std::string& hypothesis() const noexcept { return hypothesis_; }
  int retries() const noexcept { return retries_; }

 private:
  std::string hypothesis_;
  int retries_;
};

class DegenerateForm : public Error {
 public:
  explicit DegenerateForm(const std::string& form)
      : Error(ErrorCode::degenerate_form,
              "quadratic form " + form +
                  " is degenerate; a singular point probably lies on the region boundary, "
                  "try perturbing the radius"),
        form_(form) {}
  const std::string& form() const noexcept { return form_; }

 private:
  std::string form_;
};

class BoundaryHit : public Error {
 public:
  BoundaryHit(const std::string& msg, double value)
      : Error(ErrorCode::boundary_hit, msg), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class NumericFailure : public Error {
 public:
  explicit NumericFailure(const std::string& msg) : Error(ErrorCode::numeric_failure, msg) {}
};

/// A candidate point is not a clean corank-one point of the map.
class RankTestFailure : public NumericFailure {
 public:
  explicit RankTestFailure(const std::string& msg) : NumericFailure(msg) {}
};

/// The cross-cap determinant is numerically zero, so the point is not a cross-cap.
class DegenerateDeterminant : public NumericFailure {
 public:
  DegenerateDeterminant(const std::string& msg, double value) : NumericFailure(msg), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

}  // namespace crosscap

#endif  // CROSSCAP_ERRORS_HPP
