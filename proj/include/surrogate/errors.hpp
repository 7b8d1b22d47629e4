#ifndef SURROGATE_ERRORS_HPP
#define SURROGATE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace surrogate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed data: ragged samples, non-finite costs, bad JSON, etc.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A vector does not have the dimension the receiver expects.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// An enumeration (feasible set, leaf assignments) would exceed its cap.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// A perturbation was requested towards a leaf no observation can reach.
class InfeasibleTarget : public Error {
public:
  using Error::Error;
};

/// No item has a usable split threshold.
class NoSplitAvailable : public Error {
public:
  using Error::Error;
};

/// Scenario generation separated a scenario it already knew.
class ConvergenceStall : public Error {
public:
  using Error::Error;
};

/// Correlation requested on a constant series.
class DegenerateVariance : public Error {
public:
  using Error::Error;
};

} // namespace surrogate

#endif
