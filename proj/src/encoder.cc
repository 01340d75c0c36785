#include "sdst/encoder.h"

#include "sdst/errors.h"

namespace sdst {

EncoderParams add_encoder(ParameterStore *store, const std::string &prefix,
                          int vocab_size, int embedding_dim, int hidden_dim) {
  EncoderParams p;
  p.vocab_size = vocab_size;
  p.embedding_dim = embedding_dim;
  p.hidden_dim = hidden_dim;
  p.embeddings = store->add(prefix + ".embeddings", {embedding_dim, vocab_size},
                            Init::kEmbedding);
  int input_dim = embedding_dim;
  for (int layer = 0; layer < 2; ++layer) {
    const std::string l = prefix + ".layer" + std::to_string(layer);
    p.forward[layer] = add_gru_layer(store, l + ".fwd", input_dim, hidden_dim);
    p.backward[layer] = add_gru_layer(store, l + ".bwd", input_dim, hidden_dim);
    input_dim = 2 * hidden_dim;
  }
  return p;
}

EncoderTrace encode_utterance(const ParameterStore &store,
                              const EncoderParams &p,
                              const std::vector<int> &token_ids) {
  if (token_ids.empty()) throw ConfigError("cannot encode an empty utterance");
  const int n = static_cast<int>(token_ids.size());
  const int d = p.hidden_dim;
  const auto emb = store.value(p.embeddings).matrix();
  Matrix x(p.embedding_dim, n);
  for (int k = 0; k < n; ++k) {
    const int id = token_ids[k];
    if (id < 0 || id >= p.vocab_size) {
      throw ConfigError("token id " + std::to_string(id) +
                        " outside vocabulary of size " +
                        std::to_string(p.vocab_size));
    }
    x.col(k) = emb.col(id);
  }

  EncoderTrace tr;
  tr.ids = token_ids;
  const Vector h0 = Vector::Zero(d);
  gru_forward(store, p.forward[0], x, false, h0, &tr.forward[0]);
  gru_forward(store, p.backward[0], x, true, h0, &tr.backward[0]);
  Matrix x2(2 * d, n);
  x2.topRows(d) = tr.forward[0].h;
  x2.bottomRows(d) = tr.backward[0].h;
  gru_forward(store, p.forward[1], x2, false, h0, &tr.forward[1]);
  gru_forward(store, p.backward[1], x2, true, h0, &tr.backward[1]);

  tr.summary.resize(2 * d);
  tr.summary.head(d) = tr.forward[1].h.col(n - 1);
  tr.summary.tail(d) = tr.backward[1].h.col(0);
  tr.states.resize(4 * d, n);
  tr.states.middleRows(0, d) = tr.forward[0].h;
  tr.states.middleRows(d, d) = tr.backward[0].h;
  tr.states.middleRows(2 * d, d) = tr.forward[1].h;
  tr.states.middleRows(3 * d, d) = tr.backward[1].h;
  return tr;
}

void encoder_backward(const ParameterStore &store, const EncoderParams &p,
                      const EncoderTrace &trace, const Matrix &d_states,
                      const Vector &d_summary, Gradients *grads) {
  const int d = p.hidden_dim;
  const Eigen::Index n = trace.states.cols();
  Matrix d_f2 = d_states.middleRows(2 * d, d);
  Matrix d_b2 = d_states.middleRows(3 * d, d);
  d_f2.col(n - 1) += d_summary.head(d);
  d_b2.col(0) += d_summary.tail(d);
  Matrix d_x2 = gru_backward(store, p.forward[1], trace.forward[1], d_f2, grads);
  d_x2 += gru_backward(store, p.backward[1], trace.backward[1], d_b2, grads);

  Matrix d_f1 = d_states.middleRows(0, d) + d_x2.topRows(d);
  Matrix d_b1 = d_states.middleRows(d, d) + d_x2.bottomRows(d);
  Matrix d_x = gru_backward(store, p.forward[0], trace.forward[0], d_f1, grads);
  d_x += gru_backward(store, p.backward[0], trace.backward[0], d_b1, grads);

  auto g_emb = (*grads)[p.embeddings].matrix();
  for (Eigen::Index k = 0; k < n; ++k) g_emb.col(trace.ids[k]) += d_x.col(k);
}

}  // namespace sdst
