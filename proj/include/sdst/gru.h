#ifndef SDST_GRU_H_
#define SDST_GRU_H_

#include <string>
#include <vector>

#include "sdst/tensor.h"

namespace sdst {

// One GRU layer. Gate blocks are stacked row-wise in the order update (z),
// reset (r), candidate (h~):
//   z  = logistic(Wz x + Uz h + bz)
//   r  = logistic(Wr x + Ur h + br)
//   h~ = tanh(Wh x + Uh (r * h) + bh)
//   h' = (1 - z) * h + z * h~
struct GruLayerParams {
  ParamId input_weights;  // 3d x in   [Wz; Wr; Wh]
  ParamId gate_weights;   // 2d x d    [Uz; Ur]
  ParamId cand_weights;   // d x d     Uh
  ParamId bias;           // 3d        [bz; br; bh]
  int input_dim = 0;
  int hidden_dim = 0;
};

GruLayerParams add_gru_layer(ParameterStore *store, const std::string &prefix,
                             int input_dim, int hidden_dim);

Vector gru_cell_step(const ParameterStore &store, const GruLayerParams &p,
                     const Vector &x, const Vector &h_prev);

// Everything the backward pass needs for one layer run over a sequence.
struct GruTrace {
  Matrix input;   // in x n
  Matrix gates;   // 3d x n: z, r, h~ after their nonlinearities
  Matrix h_prev;  // d x n: state entering each position
  Matrix h;       // d x n: state leaving each position
  bool reverse = false;
};

// Runs the layer over the columns of `input`, right to left when `reverse`.
// Outputs stay aligned with input positions.
void gru_forward(const ParameterStore &store, const GruLayerParams &p,
                 const Matrix &input, bool reverse, const Vector &h0,
                 GruTrace *trace);

// Accumulates parameter gradients given dL/dh per position. Returns dL/dinput;
// writes dL/dh0 when `d_h0` is non-null.
Matrix gru_backward(const ParameterStore &store, const GruLayerParams &p,
                    const GruTrace &trace, const Matrix &d_h, Gradients *grads,
                    Vector *d_h0 = nullptr);

}  // namespace sdst

#endif  // SDST_GRU_H_
