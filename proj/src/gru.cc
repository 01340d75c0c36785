#include "sdst/gru.h"

#include "sdst/errors.h"

namespace sdst {

namespace {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

GruLayerParams add_gru_layer(ParameterStore *store, const std::string &prefix,
                             int input_dim, int hidden_dim) {
  GruLayerParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  const int d = hidden_dim;
  p.input_weights = store->add(prefix + ".input_weights", {3 * d, input_dim},
                               Init::kXavier);
  p.gate_weights = store->add(prefix + ".gate_weights", {2 * d, d}, Init::kXavier);
  p.cand_weights = store->add(prefix + ".cand_weights", {d, d}, Init::kXavier);
  p.bias = store->add(prefix + ".bias", {3 * d}, Init::kZero);
  return p;
}

void gru_forward(const ParameterStore &store, const GruLayerParams &p,
                 const Matrix &input, bool reverse, const Vector &h0,
                 GruTrace *trace) {
  const int d = p.hidden_dim;
  const Eigen::Index n = input.cols();
  if (input.rows() != p.input_dim || h0.size() != d) {
    throw ConfigError("GRU dimension mismatch: input " +
                      std::to_string(input.rows()) + " vs " +
                      std::to_string(p.input_dim) + ", state " +
                      std::to_string(h0.size()) + " vs " + std::to_string(d));
  }
  const auto w_in = store.value(p.input_weights).matrix();
  const auto u_gates = store.value(p.gate_weights).matrix();
  const auto u_cand = store.value(p.cand_weights).matrix();
  const auto bias = store.value(p.bias).vector();

  trace->input = input;
  trace->reverse = reverse;
  trace->gates.noalias() = w_in * input;
  trace->gates.colwise() += bias;
  trace->h_prev.resize(d, n);
  trace->h.resize(d, n);

  Vector h = h0;
  Vector zr(2 * d);
  Vector rh(d);
  Vector cand_pre(d);
  for (Eigen::Index s = 0; s < n; ++s) {
    const Eigen::Index t = reverse ? n - 1 - s : s;
    auto g = trace->gates.col(t);
    trace->h_prev.col(t) = h;
    zr.noalias() = u_gates * h;
    for (int i = 0; i < 2 * d; ++i) g(i) = logistic(g(i) + zr(i));
    rh = g.segment(d, d).cwiseProduct(h);
    cand_pre.noalias() = u_cand * rh;
    for (int i = 0; i < d; ++i) {
      const double c = std::tanh(g(2 * d + i) + cand_pre(i));
      g(2 * d + i) = c;
      h(i) = (1.0 - g(i)) * h(i) + g(i) * c;
    }
    trace->h.col(t) = h;
  }
}

Matrix gru_backward(const ParameterStore &store, const GruLayerParams &p,
                    const GruTrace &trace, const Matrix &d_h, Gradients *grads,
                    Vector *d_h0) {
  const int d = p.hidden_dim;
  const Eigen::Index n = trace.input.cols();
  const auto w_in = store.value(p.input_weights).matrix();
  const auto u_gates = store.value(p.gate_weights).matrix();
  const auto u_cand = store.value(p.cand_weights).matrix();
  auto g_gates = (*grads)[p.gate_weights].matrix();
  auto g_cand = (*grads)[p.cand_weights].matrix();

  Matrix d_pre(3 * d, n);
  Vector carry = Vector::Zero(d);
  Vector dh(d), d_zr(2 * d), d_cand(d), d_rh(d), rh(d);
  for (Eigen::Index s = n - 1; s >= 0; --s) {
    const Eigen::Index t = trace.reverse ? n - 1 - s : s;
    const auto g = trace.gates.col(t);
    const auto hp = trace.h_prev.col(t);
    dh = d_h.col(t) + carry;
    for (int i = 0; i < d; ++i) {
      const double z = g(i);
      const double c = g(2 * d + i);
      d_zr(i) = dh(i) * (c - hp(i)) * z * (1.0 - z);
      d_cand(i) = dh(i) * z * (1.0 - c * c);
      carry(i) = dh(i) * (1.0 - z);
    }
    rh = g.segment(d, d).cwiseProduct(hp);
    g_cand.noalias() += d_cand * rh.transpose();
    d_rh.noalias() = u_cand.transpose() * d_cand;
    for (int i = 0; i < d; ++i) {
      const double r = g(d + i);
      d_zr(d + i) = d_rh(i) * hp(i) * r * (1.0 - r);
      carry(i) += d_rh(i) * r;
    }
    g_gates.noalias() += d_zr * hp.transpose();
    carry.noalias() += u_gates.transpose() * d_zr;
    d_pre.col(t).head(2 * d) = d_zr;
    d_pre.col(t).tail(d) = d_cand;
  }
  (*grads)[p.input_weights].matrix().noalias() += d_pre * trace.input.transpose();
  (*grads)[p.bias].vector() += d_pre.rowwise().sum();
  if (d_h0) *d_h0 = carry;
  return w_in.transpose() * d_pre;
}

Vector gru_cell_step(const ParameterStore &store, const GruLayerParams &p,
                     const Vector &x, const Vector &h_prev) {
  GruTrace trace;
  Matrix input = x;
  gru_forward(store, p, input, false, h_prev, &trace);
  return trace.h.col(0);
}

}  // namespace sdst
