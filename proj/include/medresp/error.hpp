#pragma once

#include <stdexcept>
#include <string>

namespace medresp {

// Maps onto the CLI exit codes.
enum class ErrorCode {
  InputFormat = 2,
  Contract = 3,
  Internal = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input: bad JSON, bad timestamps, out-of-order samples.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what)
      : Error(ErrorCode::InputFormat, what) {}
};

/// A precondition of an operation was violated by otherwise well-formed data
/// (series too short, single-class training data, unknown drug, ...).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what)
      : Error(ErrorCode::Contract, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what)
      : Error(ErrorCode::Internal, what) {}
};

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace medresp
