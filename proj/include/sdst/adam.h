#ifndef SDST_ADAM_H_
#define SDST_ADAM_H_

#include <vector>

#include "sdst/tensor.h"

namespace sdst {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamState(const ParameterStore &store, AdamConfig config);

  AdamConfig config;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  long step = 0;
};

// Bias-corrected Adam update of every parameter from store->grads(); clears
// the gradients and increments the step counter.
void adam_step(ParameterStore *store, AdamState *state);

}  // namespace sdst

#endif  // SDST_ADAM_H_
