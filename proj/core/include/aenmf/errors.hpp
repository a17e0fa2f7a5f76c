#pragma once

#include <stdexcept>
#include <string>

namespace aenmf {

// Broad failure categories; the CLI maps these onto exit codes.
enum class ErrorCategory {
  kDimension,
  kParameter,
  kContract,
  kSolver,
  kInput,
  kParse,
  kConfig,
  kIo,
};

const char* to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCategory::kDimension, what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error(ErrorCategory::kParameter, what) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCategory::kContract, what) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(ErrorCategory::kSolver, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCategory::kInput, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCategory::kParse, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::kIo, what) {}
};

}  // namespace aenmf
