#pragma once

#include <stdexcept>
#include <string>

namespace accmm {

// Violated API precondition: dimension mismatch, non-finite input, bad
// hyperparameter combination.
class contract_error : public std::invalid_argument {
 public:
  explicit contract_error(const std::string& what) : std::invalid_argument(what) {}
};

// An oracle produced a non-finite value; the message carries the failing
// evaluation context (sample id, iteration when known).
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Unreadable, unknown-key, or inconsistent run configuration.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace accmm
