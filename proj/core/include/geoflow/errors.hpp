#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NonHyperbolic : std::runtime_error {
  explicit NonHyperbolic(const std::string& what) : std::runtime_error(what) {}
};

struct FoldingFailed : std::runtime_error {
  explicit FoldingFailed(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPreset : std::runtime_error {
  explicit UnknownPreset(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalFailure : std::runtime_error {
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geoflow
