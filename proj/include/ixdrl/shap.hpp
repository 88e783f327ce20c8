#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ixdrl/gbdt.hpp"

namespace ixdrl {

struct ShapVector {
  std::vector<double> phi;
  double base_value = 0.0;

  double total() const;  // base_value + sum(phi)
};

/// Path-dependent TreeSHAP: exact Shapley values of the game whose coalition
/// value is the cover-weighted conditional expectation of the model output.
ShapVector tree_shap(const GBDTModel& model, std::span<const double> x);

/// Same attribution computed by enumerating every feature subset. Intended as
/// a reference for small models; throws TooManyFeatures above 12 features.
ShapVector exact_shap_oracle(const GBDTModel& model, std::span<const double> x);

inline constexpr std::size_t kOracleMaxFeatures = 12;

}  // namespace ixdrl
