#pragma once

#include <stdexcept>
#include <string>

namespace fsv {

// Rejected user input (bad CSV cell, invalid configuration, bad query).
// `code` is a stable machine-readable identifier, e.g. "factor-count".
class InvalidInput : public std::runtime_error {
 public:
  InvalidInput(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Non-finite state or failed factorization inside the sampler.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& message, long sweep = -1, std::string block = {})
      : std::runtime_error(message), sweep_(sweep), block_(std::move(block)) {}
  long sweep() const { return sweep_; }
  const std::string& block() const { return block_; }

 private:
  long sweep_;
  std::string block_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fsv
