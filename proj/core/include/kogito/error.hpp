#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace kogito {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kTransport = 3,
  kInfeasible = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const { return ExitCode::kFailure; }
  virtual const char* kind() const { return "error"; }
};

class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kUsage; }
  const char* kind() const override { return "validation"; }
};

class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const override { return "usage"; }
};

class ConflictError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const override { return "conflict"; }
};

class ConfigurationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const override { return "configuration"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kUsage; }
  const char* kind() const override { return "io"; }
};

// Malformed input record. `line()` is 1-based.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }
  const char* kind() const override { return "parse"; }

 private:
  std::size_t line_;
};

class TransportError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kTransport; }
  const char* kind() const override { return "transport"; }
};

class CredentialError : public TransportError {
 public:
  using TransportError::TransportError;
  const char* kind() const override { return "credential"; }
};

// Non-success HTTP status from a remote endpoint.
class ApiError : public TransportError {
 public:
  ApiError(int status, std::string body_excerpt)
      : TransportError("HTTP " + std::to_string(status) + ": " + body_excerpt),
        status_(status),
        body_excerpt_(std::move(body_excerpt)) {}
  int status() const { return status_; }
  const std::string& body_excerpt() const { return body_excerpt_; }
  const char* kind() const override { return "api"; }

 private:
  int status_;
  std::string body_excerpt_;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const override { return ExitCode::kInfeasible; }
  const char* kind() const override { return "infeasible"; }
};

}  // namespace kogito
