#pragma once

#include <stdexcept>
#include <string>

namespace spinweb {

/// Invalid argument or malformed input data (CLI exit code 2).
class input_error : public std::invalid_argument {
public:
  explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A documented precondition of an operation does not hold (CLI exit code 3).
class precondition_error : public std::runtime_error {
public:
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown (non-finite values, failed factorization).
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spinweb
