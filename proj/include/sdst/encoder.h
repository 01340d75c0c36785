#ifndef SDST_ENCODER_H_
#define SDST_ENCODER_H_

#include <string>
#include <vector>

#include "sdst/gru.h"
#include "sdst/tensor.h"

namespace sdst {

// Token embeddings followed by a two-layer stacked bidirectional GRU.
struct EncoderParams {
  ParamId embeddings;  // embedding_dim x vocab_size, one column per token
  GruLayerParams forward[2];
  GruLayerParams backward[2];
  int vocab_size = 0;
  int embedding_dim = 0;
  int hidden_dim = 0;

  int summary_dim() const { return 2 * hidden_dim; }
  int state_dim() const { return 4 * hidden_dim; }
};

EncoderParams add_encoder(ParameterStore *store, const std::string &prefix,
                          int vocab_size, int embedding_dim, int hidden_dim);

struct EncoderTrace {
  std::vector<int> ids;
  GruTrace forward[2];
  GruTrace backward[2];
  // Top-layer final forward state (last position) followed by the top-layer
  // final backward state (first position): dimension 2d.
  Vector summary;
  // Per position: [layer-1 fwd; layer-1 bwd; layer-2 fwd; layer-2 bwd], 4d.
  Matrix states;
};

// Throws ConfigError on an empty sequence or an id outside the vocabulary.
EncoderTrace encode_utterance(const ParameterStore &store,
                              const EncoderParams &p,
                              const std::vector<int> &token_ids);

void encoder_backward(const ParameterStore &store, const EncoderParams &p,
                      const EncoderTrace &trace, const Matrix &d_states,
                      const Vector &d_summary, Gradients *grads);

}  // namespace sdst

#endif  // SDST_ENCODER_H_
