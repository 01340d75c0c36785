#ifndef SDST_SCORER_H_
#define SDST_SCORER_H_

#include <string>
#include <vector>

#include "sdst/candidate_set.h"
#include "sdst/tensor.h"

namespace sdst {

// Candidate scorer for one slot (or shared by all slots):
//   l_c    = W2 . logistic(W1 . (g + r_cand(c)) + b1) + b2
//   l_dc   = W4 . logistic(W3 . g + b3) + b4
//   l_null = trainable scalar
// followed by a softmax over the real candidates, dontcare and null.
struct ScorerParams {
  ParamId null_logit;  // 1
  ParamId w1;          // hidden x (shared_dim + candidate_dim)
  ParamId b1;          // hidden
  ParamId w2;          // 1 x hidden
  ParamId b2;          // 1
  ParamId w3;          // hidden x shared_dim
  ParamId b3;          // hidden
  ParamId w4;          // 1 x hidden
  ParamId b4;          // 1
  int shared_dim = 0;
  int candidate_dim = 0;
  int hidden_dim = 0;
};

ScorerParams add_scorer(ParameterStore *store, const std::string &prefix,
                        int shared_dim, int candidate_dim, int hidden_dim);

struct ScoreTrace {
  Vector shared;             // g
  Matrix candidates;         // candidate_dim x m, one column per real candidate
  Matrix candidate_hidden;   // hidden x m
  Vector dontcare_hidden;    // hidden
  std::vector<double> logits;
  std::vector<bool> mask;
  std::vector<double> probs;
};

// Scores one slate. `candidates` has one column r_cand per real candidate in
// slate order. Throws ConfigError on dimension mismatches.
Distribution score_slate(const ParameterStore &store, const ScorerParams &p,
                         const ValueSlate &slate, const Vector &shared,
                         const Matrix &candidates, ScoreTrace *trace = nullptr);

// Accumulates parameter gradients from dL/dlogits and returns dL/dg and
// dL/dr_cand (one column per candidate).
void score_backward(const ParameterStore &store, const ScorerParams &p,
                    const ScoreTrace &trace, const std::vector<double> &d_logits,
                    Gradients *grads, Vector *d_shared, Matrix *d_candidates);

}  // namespace sdst

#endif  // SDST_SCORER_H_
