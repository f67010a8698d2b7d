#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gkz {

// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kValidation = 1,
  kCertification = 2,
  kNumericTolerance = 3,
  kParse = 4,
};

// Base error. Every error names the pipeline stage that raised it.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }
  virtual ExitCode exit_code() const noexcept { return ExitCode::kValidation; }

 private:
  std::string stage_;
};

// Invalid input: zero columns, rank deficiency, malformed shapes.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A required exact certificate could not be produced (weight genericity,
// simplicial triangulation, standard-pair multiplicities, ...).
class CertificationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kCertification; }
};

// Numeric evaluation failed or a tolerance was not met.
class NumericError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kNumericTolerance; }
};

class ParseError : public Error {
 public:
  ParseError(std::string stage, const std::string& what, std::size_t position)
      : Error(std::move(stage), what + " (at offset " + std::to_string(position) + ")"),
        detail_(what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }
  // The message without the stage and offset.
  const std::string& detail() const noexcept { return detail_; }
  ExitCode exit_code() const noexcept override { return ExitCode::kParse; }

 private:
  std::string detail_;
  std::size_t position_;
};

}  // namespace gkz
