#include "sdst/adam.h"

#include <cmath>

#include "sdst/errors.h"

namespace sdst {

AdamState::AdamState(const ParameterStore &store, AdamConfig cfg)
    : config(cfg) {
  if (!(cfg.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  for (ParamId id : store.ids()) {
    first_moment.emplace_back(store.value(id).shape());
    second_moment.emplace_back(store.value(id).shape());
  }
}

void adam_step(ParameterStore *store, AdamState *state) {
  const AdamConfig &c = state->config;
  ++state->step;
  const double t = static_cast<double>(state->step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (ParamId id : store->ids()) {
    double *theta = store->value(id).data();
    const double *g = store->grad(id).data();
    double *m = state->first_moment.at(id.index).data();
    double *v = state->second_moment.at(id.index).data();
    const size_t n = store->value(id).size();
    for (size_t i = 0; i < n; ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      theta[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
  store->zero_grad();
}

}  // namespace sdst
