#pragma once

#include <stdexcept>
#include <string>

namespace grf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivative order beyond what a basis family implements was requested.
class OrderUnsupported : public Error {
 public:
  OrderUnsupported(int requested, int supported)
      : Error("derivative order " + std::to_string(requested) +
              " exceeds supported order " + std::to_string(supported)),
        requested_(requested),
        supported_(supported) {}

  int requested() const { return requested_; }
  int supported() const { return supported_; }

 private:
  int requested_;
  int supported_;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gram system too ill-conditioned to produce a trustworthy answer.
class IllConditioned : public Error {
 public:
  explicit IllConditioned(double condition)
      : Error("Gram matrix condition estimate " + std::to_string(condition) +
              " exceeds limit"),
        condition_(condition) {}

  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Input document does not match the expected schema. `pointer()` is a JSON
/// pointer to the offending node.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace grf
