#pragma once

#include <stdexcept>
#include <string>

namespace lindil {

/// Stable error categories; the C API and the CLI map these onto codes.
enum class ErrorKind {
  Domain,
  InfeasibleEmbedding,
  MissingDroplet,
  SupplyExhausted,
  InvariantViolation,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct InfeasibleEmbedding : Error {
  explicit InfeasibleEmbedding(const std::string& what)
      : Error(ErrorKind::InfeasibleEmbedding, what) {}
};

struct MissingDroplet : Error {
  explicit MissingDroplet(const std::string& what) : Error(ErrorKind::MissingDroplet, what) {}
};

struct SupplyExhausted : Error {
  explicit SupplyExhausted(const std::string& what) : Error(ErrorKind::SupplyExhausted, what) {}
};

struct InvariantViolation : Error {
  explicit InvariantViolation(const std::string& what)
      : Error(ErrorKind::InvariantViolation, what) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

}  // namespace lindil
