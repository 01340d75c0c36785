#include "sdst/ops.h"

#include <cmath>
#include <limits>

#include "sdst/errors.h"

namespace sdst {

std::vector<double> softmax_masked(const std::vector<double> &logits,
                                   const std::vector<bool> &mask) {
  if (logits.size() != mask.size()) {
    throw ConfigError("softmax: logits and mask lengths differ");
  }
  double max_logit = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) {
      any = true;
      max_logit = std::max(max_logit, logits[i]);
    }
  }
  if (!any) throw ConfigError("softmax: every position is masked");
  std::vector<double> p(logits.size(), 0.0);
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) {
      p[i] = std::exp(logits[i] - max_logit);
      total += p[i];
    }
  }
  for (double &x : p) x /= total;
  return p;
}

double cross_entropy(const std::vector<double> &probs,
                     const std::vector<bool> &mask, int label) {
  if (label < 0 || label >= static_cast<int>(probs.size()) || !mask[label]) {
    throw ConfigError("cross entropy label " + std::to_string(label) +
                      " is out of range or masked");
  }
  return -std::log(std::max(probs[label], kProbabilityFloor));
}

std::vector<double> softmax_backward(const std::vector<double> &probs,
                                     const std::vector<bool> &mask,
                                     const std::vector<double> &d_probs) {
  double dot = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (mask[i]) dot += probs[i] * d_probs[i];
  }
  std::vector<double> d_logits(probs.size(), 0.0);
  for (size_t i = 0; i < probs.size(); ++i) {
    if (mask[i]) d_logits[i] = probs[i] * (d_probs[i] - dot);
  }
  return d_logits;
}

}  // namespace sdst
