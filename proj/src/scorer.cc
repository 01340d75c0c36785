#include "sdst/scorer.h"

#include "sdst/errors.h"
#include "sdst/ops.h"

namespace sdst {

namespace {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ScorerParams add_scorer(ParameterStore *store, const std::string &prefix,
                        int shared_dim, int candidate_dim, int hidden_dim) {
  ScorerParams p;
  p.shared_dim = shared_dim;
  p.candidate_dim = candidate_dim;
  p.hidden_dim = hidden_dim;
  p.null_logit = store->add(prefix + ".null_logit", {1}, Init::kZero);
  p.w1 = store->add(prefix + ".w1", {hidden_dim, shared_dim + candidate_dim},
                    Init::kXavier);
  p.b1 = store->add(prefix + ".b1", {hidden_dim}, Init::kZero);
  p.w2 = store->add(prefix + ".w2", {1, hidden_dim}, Init::kXavier);
  p.b2 = store->add(prefix + ".b2", {1}, Init::kZero);
  p.w3 = store->add(prefix + ".w3", {hidden_dim, shared_dim}, Init::kXavier);
  p.b3 = store->add(prefix + ".b3", {hidden_dim}, Init::kZero);
  p.w4 = store->add(prefix + ".w4", {1, hidden_dim}, Init::kXavier);
  p.b4 = store->add(prefix + ".b4", {1}, Init::kZero);
  return p;
}

Distribution score_slate(const ParameterStore &store, const ScorerParams &p,
                         const ValueSlate &slate, const Vector &shared,
                         const Matrix &candidates, ScoreTrace *trace) {
  const int m = slate.num_candidates();
  if (shared.size() != p.shared_dim ||
      (m > 0 && candidates.rows() != p.candidate_dim) || candidates.cols() != m) {
    throw ConfigError("scorer dimension mismatch for slot '" + slate.slot() +
                      "': g " + std::to_string(shared.size()) + "/" +
                      std::to_string(p.shared_dim) + ", r_cand " +
                      std::to_string(candidates.rows()) + "x" +
                      std::to_string(candidates.cols()) + " vs " +
                      std::to_string(p.candidate_dim) + "x" + std::to_string(m));
  }
  const auto w1 = store.value(p.w1).matrix();
  const auto w1_shared = w1.leftCols(p.shared_dim);
  const auto w1_cand = w1.rightCols(p.candidate_dim);
  const auto b1 = store.value(p.b1).vector();
  const auto w2 = store.value(p.w2).matrix();
  const double b2 = store.value(p.b2).data()[0];
  const auto w3 = store.value(p.w3).matrix();
  const auto b3 = store.value(p.b3).vector();
  const auto w4 = store.value(p.w4).matrix();
  const double b4 = store.value(p.b4).data()[0];

  ScoreTrace local;
  ScoreTrace &tr = trace ? *trace : local;
  tr.shared = shared;
  tr.candidates = candidates;
  tr.logits.assign(slate.size(), 0.0);
  tr.mask = slate.mask();

  const Vector shared_part = w1_shared * shared + b1;
  tr.candidate_hidden.resize(p.hidden_dim, m);
  if (m > 0) {
    tr.candidate_hidden.noalias() = w1_cand * candidates;
    tr.candidate_hidden.colwise() += shared_part;
    tr.candidate_hidden = tr.candidate_hidden.unaryExpr([](double x) { return logistic(x); });
    const Eigen::RowVectorXd lc = w2 * tr.candidate_hidden;
    for (int i = 0; i < m; ++i) tr.logits[i] = lc(i) + b2;
  }
  tr.dontcare_hidden = (w3 * shared + b3).unaryExpr([](double x) { return logistic(x); });
  tr.logits[slate.dontcare_index()] = (w4 * tr.dontcare_hidden)(0) + b4;
  tr.logits[slate.null_index()] = store.value(p.null_logit).data()[0];
  tr.probs = softmax_masked(tr.logits, tr.mask);
  return Distribution{slate, tr.probs};
}

void score_backward(const ParameterStore &store, const ScorerParams &p,
                    const ScoreTrace &tr, const std::vector<double> &d_logits,
                    Gradients *grads, Vector *d_shared, Matrix *d_candidates) {
  const int m = static_cast<int>(tr.candidates.cols());
  const int k = static_cast<int>(tr.logits.size()) - 2;  // capacity
  const auto w1 = store.value(p.w1).matrix();
  const auto w2 = store.value(p.w2).matrix();
  const auto w3 = store.value(p.w3).matrix();
  const auto w4 = store.value(p.w4).matrix();
  auto g_w1 = (*grads)[p.w1].matrix();

  *d_shared = Vector::Zero(p.shared_dim);
  d_candidates->resize(p.candidate_dim, m);
  if (m > 0) {
    Eigen::RowVectorXd dl(m);
    for (int i = 0; i < m; ++i) dl(i) = d_logits[i];
    (*grads)[p.w2].matrix().noalias() += dl * tr.candidate_hidden.transpose();
    (*grads)[p.b2].data()[0] += dl.sum();
    Matrix d_act = w2.transpose() * dl;  // hidden x m
    d_act = d_act.cwiseProduct(
        tr.candidate_hidden.cwiseProduct((1.0 - tr.candidate_hidden.array()).matrix()));
    const Vector d_act_sum = d_act.rowwise().sum();
    g_w1.leftCols(p.shared_dim).noalias() += d_act_sum * tr.shared.transpose();
    g_w1.rightCols(p.candidate_dim).noalias() += d_act * tr.candidates.transpose();
    (*grads)[p.b1].vector() += d_act_sum;
    d_shared->noalias() += w1.leftCols(p.shared_dim).transpose() * d_act_sum;
    d_candidates->noalias() = w1.rightCols(p.candidate_dim).transpose() * d_act;
  }
  const double dl_dc = d_logits[k];
  const Vector &hd = tr.dontcare_hidden;
  (*grads)[p.w4].matrix().noalias() += dl_dc * hd.transpose();
  (*grads)[p.b4].data()[0] += dl_dc;
  const Vector d_act_dc =
      (w4.transpose() * dl_dc).cwiseProduct(hd.cwiseProduct((1.0 - hd.array()).matrix()));
  (*grads)[p.w3].matrix().noalias() += d_act_dc * tr.shared.transpose();
  (*grads)[p.b3].vector() += d_act_dc;
  d_shared->noalias() += w3.transpose() * d_act_dc;
  (*grads)[p.null_logit].data()[0] += d_logits[k + 1];
}

}  // namespace sdst
