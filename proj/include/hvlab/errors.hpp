#pragma once

#include <stdexcept>
#include <string>

namespace hvlab {

// Malformed or inconsistent caller input (bad shapes, undefined variables, schema violations).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Conditioning on an event of probability zero.
class ConditioningError : public std::domain_error {
 public:
  explicit ConditioningError(const std::string& what) : std::domain_error(what) {}
};

// An operation refused because a named precondition check failed.
class RefusalError : public std::runtime_error {
 public:
  RefusalError(std::string check, const std::string& what)
      : std::runtime_error(what), check_(std::move(check)) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

}  // namespace hvlab
