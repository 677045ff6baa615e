#pragma once

#include <stdexcept>
#include <string>

namespace takumlab {

/// Bad arguments or malformed requests (CLI exit code 1).
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data: parse failures, integrity
/// violations in shipped tables (CLI exit code 2).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Download or connectivity failure (CLI exit code 3).
class NetworkError : public std::runtime_error {
 public:
  explicit NetworkError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace takumlab
