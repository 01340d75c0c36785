#include "sdst/gradient_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sdst/errors.h"

namespace sdst {

GradientCheckResult gradient_check(const LossFunction &loss, ParameterStore *store,
                                   const GradientCheckOptions &options) {
  if (!(options.epsilon > 0.0)) {
    throw ConfigError("gradient check epsilon must be positive");
  }
  store->zero_grad();
  const double base = loss(store, true);
  if (!std::isfinite(base)) throw NumericalError("non-finite loss at base point");
  Gradients analytic = store->grads();
  store->zero_grad();

  std::mt19937_64 rng(options.seed);
  GradientCheckResult result;
  for (ParamId id : store->ids()) {
    Tensor &value = store->value(id);
    std::vector<size_t> elements(value.size());
    std::iota(elements.begin(), elements.end(), size_t{0});
    if (static_cast<int>(elements.size()) > options.max_elements_per_tensor) {
      std::shuffle(elements.begin(), elements.end(), rng);
      elements.resize(options.max_elements_per_tensor);
      std::sort(elements.begin(), elements.end());
    }
    for (size_t i : elements) {
      const double original = value.data()[i];
      value.data()[i] = original + options.epsilon;
      const double plus = loss(store, false);
      value.data()[i] = original - options.epsilon;
      const double minus = loss(store, false);
      value.data()[i] = original;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw NumericalError("non-finite loss while perturbing '" +
                             store->name(id) + "'");
      }
      const double numeric = (plus - minus) / (2.0 * options.epsilon);
      const double a = analytic[id].data()[i];
      if (!std::isfinite(a)) {
        throw NumericalError("non-finite analytic gradient for '" +
                             store->name(id) + "'");
      }
      const double denom =
          std::max({std::abs(a), std::abs(numeric), options.denominator_floor});
      const double err = std::abs(a - numeric) / denom;
      ++result.elements_checked;
      if (err > result.max_relative_error || result.worst_parameter.empty()) {
        result.max_relative_error = std::max(err, result.max_relative_error);
        result.worst_parameter = store->name(id) + "[" + std::to_string(i) + "]";
      }
    }
  }
  return result;
}

}  // namespace sdst
