#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace suprec {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the exhaustive decoder when C(p, s) exceeds the enumeration budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(double subset_count, double budget);

  double subset_count() const noexcept { return subset_count_; }
  double budget() const noexcept { return budget_; }

 private:
  double subset_count_;
  double budget_;
};

}  // namespace suprec
