#include "suprec/errors.hpp"

#include <cstdio>

namespace suprec {

namespace {
std::string budget_message(double subset_count, double budget) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "enumeration budget exceeded: C(p,s) = %.6g > budget %.6g",
                subset_count, budget);
  return buf;
}
}  // namespace

BudgetError::BudgetError(double subset_count, double budget)
    : std::runtime_error(budget_message(subset_count, budget)),
      subset_count_(subset_count),
      budget_(budget) {}

}  // namespace suprec
