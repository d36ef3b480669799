// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cbal {

enum class ErrorCode {
  RowNotStochastic,
  NegativeEntry,
  NonFinite,
  DimensionMismatch,
  BudgetMismatch,
  InvalidCycle,
  InvalidDistribution,
  ShapeMismatch,
  TooFewSamples,
  InfeasibleBudget,
  Timeout,
  InstanceTooLarge,
  NumericalFailure,
  DegenerateSpec,
  IndivisibleInit,
  EmptyLabeledSet,
  BudgetExceedsPool,
  ConfigInvalid,
  NoPlateau,
  ConfigParse,
  OutputUnwritable,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cbal
