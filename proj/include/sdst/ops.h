#ifndef SDST_OPS_H_
#define SDST_OPS_H_

#include <vector>

namespace sdst {

inline constexpr double kProbabilityFloor = 1e-12;

// Softmax restricted to positions where mask is true; masked positions get
// exactly 0. Throws ConfigError if every position is masked.
std::vector<double> softmax_masked(const std::vector<double> &logits,
                                   const std::vector<bool> &mask);

// -ln(max(probs[label], 1e-12)). Throws ConfigError when `label` is masked.
double cross_entropy(const std::vector<double> &probs,
                     const std::vector<bool> &mask, int label);

// dL/dlogits for p = softmax_masked(logits) given dL/dp.
std::vector<double> softmax_backward(const std::vector<double> &probs,
                                     const std::vector<bool> &mask,
                                     const std::vector<double> &d_probs);

}  // namespace sdst

#endif  // SDST_OPS_H_
