#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmlfs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or command-line usage.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during optimization.
class NumericError : public Error {
 public:
  NumericError(std::size_t iteration, std::string matrix)
      : Error("non-finite value in " + matrix + " at iteration " + std::to_string(iteration)),
        iteration_(iteration),
        matrix_(std::move(matrix)) {}

  std::size_t iteration() const { return iteration_; }
  const std::string& matrix() const { return matrix_; }

 private:
  std::size_t iteration_;
  std::string matrix_;
};

}  // namespace pmlfs
