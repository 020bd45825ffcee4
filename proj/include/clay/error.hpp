#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace clay {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates an operation's mathematical domain (empty cloud, zero quaternion, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but an operation precondition does not hold.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class EmptyMeshError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonManifoldError : public DomainError {
 public:
  NonManifoldError(std::int32_t a, std::int32_t b, int face_count)
      : DomainError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) +
                    ") shared by " + std::to_string(face_count) + " faces"),
        edge_{a, b} {}

  std::array<std::int32_t, 2> edge() const { return edge_; }

 private:
  std::array<std::int32_t, 2> edge_;
};

/// Unknown tag, mismatched stage arity, or other caller configuration mistake.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what, const std::string& source = {})
      : Error((source.empty() ? "" : source + ":") + "line " + std::to_string(line) + ": " + what),
        line_(line),
        message_(what) {}

  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

  /// The same error attributed to a named source, usually a file path.
  ParseError in(const std::string& source) const { return ParseError(line_, message_, source); }

 private:
  std::size_t line_;
  std::string message_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGradientError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference check skipped too many probes to be meaningful.
class InconclusiveCheckError : public Error {
 public:
  using Error::Error;
};

}  // namespace clay
