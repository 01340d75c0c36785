#ifndef SDST_GRADIENT_CHECK_H_
#define SDST_GRADIENT_CHECK_H_

#include <cstdint>
#include <functional>
#include <string>

#include "sdst/tensor.h"

namespace sdst {

// Computes the loss at the store's current values. When `with_gradients` is
// true it must also accumulate dL/dtheta into store->grads().
using LossFunction = std::function<double(ParameterStore *store, bool with_gradients)>;

struct GradientCheckOptions {
  double epsilon = 1e-5;
  // Tensors with more elements than this are checked on a random sample of
  // this many elements.
  int max_elements_per_tensor = 64;
  // Relative errors use max(|analytic|, |numeric|, denominator_floor).
  double denominator_floor = 1e-4;
  uint64_t seed = 0;
};

struct GradientCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  long elements_checked = 0;
};

// Compares analytic gradients against central differences
// (f(theta+eps) - f(theta-eps)) / 2eps. Throws ConfigError for eps <= 0 and
// NumericalError on non-finite losses or gradients.
GradientCheckResult gradient_check(const LossFunction &loss, ParameterStore *store,
                                   const GradientCheckOptions &options = {});

}  // namespace sdst

#endif  // SDST_GRADIENT_CHECK_H_
