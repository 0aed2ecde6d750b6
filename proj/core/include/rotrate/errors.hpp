#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rotrate {

/// Caller violated a documented precondition (bad sizes, bad parameters).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (NaN, infinity).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An embedding configuration that cannot satisfy K*D >= 2d+1.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A reference point coincides with (or lies on) the observed curve.
class DegeneratePointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Curve samples too sparse to resolve angular increments.
class UndersampledError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two lift components came within the match radius: delta >= separation.
class AmbiguityError : public std::runtime_error {
 public:
  AmbiguityError(std::size_t assigned_index, std::size_t other_index,
                 const std::string& what)
      : std::runtime_error(what),
        assigned_index_(assigned_index),
        other_index_(other_index) {}

  std::size_t assigned_index() const noexcept { return assigned_index_; }
  std::size_t other_index() const noexcept { return other_index_; }

 private:
  std::size_t assigned_index_;
  std::size_t other_index_;
};

/// Ground-truth lift could not be reconstructed from the supplied samples.
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Restricted three-body integration reached a primary.
class CollisionError : public std::runtime_error {
 public:
  CollisionError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Malformed CSV or configuration text, or a file that cannot be opened.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Planar observations wind |W| != 1 times around the reference point, so
/// the measured rate would be |W| times the underlying one.
class WindingRefusal : public std::runtime_error {
 public:
  WindingRefusal(int winding, const std::string& what)
      : std::runtime_error(what), winding_(winding) {}
  int winding() const noexcept { return winding_; }

 private:
  int winding_;
};

}  // namespace rotrate
