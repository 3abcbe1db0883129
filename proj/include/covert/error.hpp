#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covert {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed model input: parse failure, bad row sums, dimension mismatch.
class ModelError : public Error {
 public:
  enum class Kind { Parse, RowSum, Dimension, Range };

  ModelError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A divergence was asked for where the reference measure has a zero the
/// argument does not share.
class SupportError : public Error {
 public:
  enum class Kind { AbsoluteContinuity, DivisionSupport };

  SupportError(Kind kind, std::size_t index)
      : Error(std::string(kind == Kind::AbsoluteContinuity
                              ? "absolute continuity violated"
                              : "division by zero reference mass") +
              " at index " + std::to_string(index)),
        kind_(kind),
        index_(index) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// The warden cannot tell the coded mixture from Q0 (chi-squared is zero).
class DegenerateDivergence : public Error {
 public:
  DegenerateDivergence() : Error("chi-squared distance of the layer mixture is zero") {}
};

/// A single-user covert capacity vanished where a positive one is required.
class ZeroCapacity : public Error {
 public:
  explicit ZeroCapacity(int user)
      : Error("covert capacity of user " + std::to_string(user) + " is zero"), user_(user) {}

  int user() const noexcept { return user_; }

 private:
  int user_;
};

}  // namespace covert
