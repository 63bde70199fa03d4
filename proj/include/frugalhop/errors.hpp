#pragma once

#include <stdexcept>
#include <string>

namespace fhop {

// Bad parameters, malformed input files, schema violations. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures. CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Remote endpoint failures that abort an operation (per-hop transport
// failures are encoded in parse_ok / retrieval_ok instead). CLI exit code 2.
class TransportError : public std::runtime_error {
 public:
  explicit TransportError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fhop
