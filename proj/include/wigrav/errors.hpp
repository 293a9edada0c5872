#pragma once

#include <stdexcept>
#include <string>

namespace wigrav {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A raw parameter was zero, negative or not finite.
class NonPositive : public Error {
 public:
  using Error::Error;
};

/// The geometry does not satisfy sigma < delta_x < d.
class OrderingViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed parameter file (unknown key, bad number, bad syntax).
class ParamsFileError : public Error {
 public:
  using Error::Error;
};

/// Branch index outside 1..9.
class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Newtonian potential evaluated where d + sqrt(2) x_rel <= 0.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The exact trajectory came within 0.1 d of the Newtonian singularity.
class SingularityApproached : public Error {
 public:
  using Error::Error;
};

/// A quadrature specification failed validation.
class SpecViolation : public Error {
 public:
  using Error::Error;
};

/// The requested evaluation method is not available for this model.
class MethodUnsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace wigrav
