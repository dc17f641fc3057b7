#pragma once

#include <stdexcept>
#include <string>

namespace htlab {

// Base for all library failures. Precondition and validation failures are
// DomainError; malformed serialized input is SchemaError.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

// A search or expansion ran out of its explicit budget.
class BudgetExceeded : public DomainError {
public:
  BudgetExceeded(const std::string& what, long depth)
      : DomainError(what + " (depth reached: " + std::to_string(depth) + ")"), depth_(depth) {}
  long depth() const noexcept { return depth_; }

private:
  long depth_;
};

class SchemaError : public Error {
public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace htlab
