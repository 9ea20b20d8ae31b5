#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace noether {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at position " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }
  const char* kind() const noexcept override { return "SyntaxError"; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  explicit UnknownIdentifier(const std::string& name)
      : Error("unknown identifier '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }
  const char* kind() const noexcept override { return "UnknownIdentifier"; }

 private:
  std::string name_;
};

class IndexOutOfRange : public Error {
 public:
  IndexOutOfRange(const std::string& name, int dimension)
      : Error("variable '" + name + "' out of range for n=" + std::to_string(dimension)) {}
  const char* kind() const noexcept override { return "IndexOutOfRange"; }
};

class MissingParameter : public Error {
 public:
  explicit MissingParameter(const std::string& name)
      : Error("parameter '" + name + "' has no bound value"), name_(name) {}
  const std::string& name() const noexcept { return name_; }
  const char* kind() const noexcept override { return "MissingParameter"; }

 private:
  std::string name_;
};

/// Evaluation left the domain of a function (log of nonpositive, division by
/// zero, ...). `subtree` is the printed form of the offending node.
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subtree,
              std::optional<std::size_t> sample_index = std::nullopt)
      : Error(message + " in '" + subtree + "'" +
              (sample_index ? " at sample " + std::to_string(*sample_index) : std::string())),
        subtree_(std::move(subtree)),
        sample_index_(sample_index) {}
  const std::string& subtree() const noexcept { return subtree_; }
  std::optional<std::size_t> sample_index() const noexcept { return sample_index_; }
  const char* kind() const noexcept override { return "DomainError"; }

 private:
  std::string subtree_;
  std::optional<std::size_t> sample_index_;
};

/// The elementary action is too close to zero: the point is outside the
/// region where the Poincare-Cartan form is contact.
class ContactDegenerate : public Error {
 public:
  explicit ContactDegenerate(double rho)
      : Error("contact condition fails: |rho| = " + std::to_string(rho) + " below threshold"),
        rho_(rho) {}
  double rho() const noexcept { return rho_; }
  const char* kind() const noexcept override { return "ContactDegenerate"; }

 private:
  double rho_;
};

class UnknownSystem : public Error {
 public:
  explicit UnknownSystem(const std::string& name) : Error("unknown system '" + name + "'") {}
  const char* kind() const noexcept override { return "UnknownSystem"; }
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DimensionMismatch"; }
};

}  // namespace noether
