#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace propphase {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value (out-of-domain parameter, bad configuration).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was requested for a family outside the construction it
/// belongs to (e.g. a generating-function derivative of a location-shift
/// family).
class ConstructionMismatchError : public Error {
 public:
  using Error::Error;
};

/// No estimator kernel exists for this family at all; requesting any
/// kernel or estimate is rejected outright.
class NoConstructionError : public ConstructionMismatchError {
 public:
  using ConstructionMismatchError::ConstructionMismatchError;
};

/// A data value lies outside the support of the declared family.
class SupportError : public Error {
 public:
  SupportError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// A kernel magnitude left the representable double range.
class KernelOverflowError : public Error {
 public:
  KernelOverflowError(const std::string& what, double t)
      : Error(what), t_(t), x_(0), has_x_(false) {}
  KernelOverflowError(const std::string& what, double t, double x)
      : Error(what), t_(t), x_(x), has_x_(true) {}
  double t() const { return t_; }
  bool has_x() const { return has_x_; }
  double x() const { return x_; }

 private:
  double t_;
  double x_;
  bool has_x_;
};

/// Malformed CLI arguments or scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace propphase
