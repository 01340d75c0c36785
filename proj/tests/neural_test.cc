#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdst/adam.h"
#include "sdst/encoder.h"
#include "sdst/errors.h"
#include "sdst/gradient_check.h"
#include "sdst/gru.h"
#include "sdst/ops.h"
#include "sdst/tensor.h"

namespace sdst {
namespace {

void randomize(ParameterStore *store, uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (ParamId id : store->ids()) {
    for (double &v : store->value(id).values()) v = u(rng);
  }
}

Vector random_vector(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Element-by-element evaluation of the GRU cell equations.
std::vector<double> reference_gru_step(const ParameterStore &s, const GruLayerParams &p,
                                       const std::vector<double> &x, const std::vector<double> &h) {
  const int d = p.hidden_dim;
  const int in = p.input_dim;
  const auto W = s.value(p.input_weights).matrix();
  const auto U = s.value(p.gate_weights).matrix();
  const auto Uh = s.value(p.cand_weights).matrix();
  const auto b = s.value(p.bias).vector();
  std::vector<double> z(d), r(d), out(d);
  for (int i = 0; i < d; ++i) {
    double az = b(i), ar = b(d + i);
    for (int j = 0; j < in; ++j) {
      az += W(i, j) * x[j];
      ar += W(d + i, j) * x[j];
    }
    for (int j = 0; j < d; ++j) {
      az += U(i, j) * h[j];
      ar += U(d + i, j) * h[j];
    }
    z[i] = logistic(az);
    r[i] = logistic(ar);
  }
  for (int i = 0; i < d; ++i) {
    double ah = b(2 * d + i);
    for (int j = 0; j < in; ++j) ah += W(2 * d + i, j) * x[j];
    for (int j = 0; j < d; ++j) ah += Uh(i, j) * r[j] * h[j];
    out[i] = (1.0 - z[i]) * h[i] + z[i] * std::tanh(ah);
  }
  return out;
}

TEST(GruTest, ZeroParametersHalveState) {
  ParameterStore store(1);
  const GruLayerParams p = add_gru_layer(&store, "g", 3, 4);
  for (ParamId id : store.ids()) store.value(id).set_zero();
  const Vector h_prev = random_vector(4, 2);
  const Vector h = gru_cell_step(store, p, random_vector(3, 3), h_prev);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(h(i), 0.5 * h_prev(i));
  const Vector h0 = gru_cell_step(store, p, random_vector(3, 3), Vector::Zero(4));
  EXPECT_EQ(h0, Vector::Zero(4));
}

TEST(GruTest, MatchesReferenceEquations) {
  ParameterStore store(1);
  const GruLayerParams p = add_gru_layer(&store, "g", 5, 3);
  randomize(&store, 9);
  const Vector x = random_vector(5, 4);
  const Vector h_prev = random_vector(3, 5);
  const Vector h = gru_cell_step(store, p, x, h_prev);
  const auto ref = reference_gru_step(store, p, std::vector<double>(x.data(), x.data() + 5),
                                      std::vector<double>(h_prev.data(), h_prev.data() + 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(h(i), ref[i], 1e-14);
}

TEST(GruTest, ReverseRunAlignsOutputs) {
  ParameterStore store(1);
  const GruLayerParams p = add_gru_layer(&store, "g", 2, 3);
  randomize(&store, 4);
  Matrix input(2, 3);
  input << 0.1, -0.2, 0.3, 0.5, 0.0, -0.4;
  GruTrace tr;
  gru_forward(store, p, input, true, Vector::Zero(3), &tr);
  const Vector h2 = gru_cell_step(store, p, input.col(2), Vector::Zero(3));
  EXPECT_NEAR((tr.h.col(2) - h2).norm(), 0.0, 1e-15);
  const Vector h1 = gru_cell_step(store, p, input.col(1), h2);
  EXPECT_NEAR((tr.h.col(1) - h1).norm(), 0.0, 1e-15);
}

TEST(GruTest, GradientsMatchFiniteDifferences) {
  ParameterStore store(1);
  const GruLayerParams p = add_gru_layer(&store, "g", 3, 4);
  randomize(&store, 21);
  Matrix input = Matrix::Random(3, 5);
  const Matrix weights = Matrix::Random(4, 5);
  for (bool reverse : {false, true}) {
    LossFunction loss = [&](ParameterStore *s, bool with_gradients) {
      GruTrace tr;
      gru_forward(*s, p, input, reverse, Vector::Zero(4), &tr);
      if (with_gradients) gru_backward(*s, p, tr, weights, &s->grads());
      return (tr.h.array() * weights.array()).sum();
    };
    const GradientCheckResult r = gradient_check(loss, &store);
    EXPECT_LT(r.max_relative_error, 1e-5) << r.worst_parameter;
  }
}

TEST(EncoderTest, Shapes) {
  ParameterStore store(1);
  const EncoderParams p = add_encoder(&store, "enc", 10, 6, 4);
  const EncoderTrace t = encode_utterance(store, p, {2, 3, 4});
  EXPECT_EQ(t.summary.size(), 8);
  EXPECT_EQ(t.states.rows(), 16);
  EXPECT_EQ(t.states.cols(), 3);
  const EncoderTrace one = encode_utterance(store, p, {5});
  EXPECT_EQ(one.states.cols(), 1);
  EXPECT_EQ(one.summary.size(), 8);
}

TEST(EncoderTest, SummaryIsTopLayerFinalStates) {
  ParameterStore store(1);
  const EncoderParams p = add_encoder(&store, "enc", 10, 6, 4);
  const EncoderTrace t = encode_utterance(store, p, {2, 3, 4});
  EXPECT_EQ(t.summary.head(4), t.states.col(2).segment(8, 4));
  EXPECT_EQ(t.summary.tail(4), t.states.col(0).segment(12, 4));
}

TEST(EncoderTest, RejectsEmptyAndUnknownIds) {
  ParameterStore store(1);
  const EncoderParams p = add_encoder(&store, "enc", 10, 6, 4);
  EXPECT_THROW(encode_utterance(store, p, {}), ConfigError);
  EXPECT_THROW(encode_utterance(store, p, {10}), ConfigError);
  EXPECT_THROW(encode_utterance(store, p, {-1}), ConfigError);
}

TEST(EncoderTest, ReversalSwapsLayerOneDirections) {
  ParameterStore a(3);
  const EncoderParams p = add_encoder(&a, "enc", 10, 5, 3);
  randomize(&a, 8);
  ParameterStore b = a;
  auto swap = [&](ParamId x, ParamId y) {
    b.value(x) = a.value(y);
    b.value(y) = a.value(x);
  };
  swap(p.forward[0].input_weights, p.backward[0].input_weights);
  swap(p.forward[0].gate_weights, p.backward[0].gate_weights);
  swap(p.forward[0].cand_weights, p.backward[0].cand_weights);
  swap(p.forward[0].bias, p.backward[0].bias);
  const std::vector<int> ids = {2, 7, 4, 9};
  const std::vector<int> reversed(ids.rbegin(), ids.rend());
  const EncoderTrace orig = encode_utterance(a, p, ids);
  const EncoderTrace rev = encode_utterance(b, p, reversed);
  EXPECT_NEAR((rev.forward[0].h.col(3) - orig.backward[0].h.col(0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((rev.backward[0].h.col(0) - orig.forward[0].h.col(3)).norm(), 0.0, 1e-15);
}

TEST(EncoderTest, GradientsMatchFiniteDifferences) {
  ParameterStore store(1);
  const EncoderParams p = add_encoder(&store, "enc", 8, 4, 3);
  randomize(&store, 5);
  const std::vector<int> ids = {1, 5, 5, 7, 2};
  const Matrix ws = Matrix::Random(12, 5);
  const Vector wc = Vector::Random(6);
  LossFunction loss = [&](ParameterStore *s, bool with_gradients) {
    const EncoderTrace t = encode_utterance(*s, p, ids);
    if (with_gradients) encoder_backward(*s, p, t, ws, wc, &s->grads());
    return (t.states.array() * ws.array()).sum() + t.summary.dot(wc);
  };
  const GradientCheckResult r = gradient_check(loss, &store);
  EXPECT_LT(r.max_relative_error, 1e-5) << r.worst_parameter;
}

TEST(SoftmaxTest, Examples) {
  const auto u = softmax_masked({0, 0, 0, 0}, {true, true, true, true});
  for (double p : u) EXPECT_DOUBLE_EQ(p, 0.25);
  EXPECT_EQ(softmax_masked({1, 1}, {true, false}), (std::vector<double>{1.0, 0.0}));
  const auto l = softmax_masked({std::log(2.0), 0, 0}, {true, true, true});
  EXPECT_NEAR(l[0], 0.5, 1e-15);
  EXPECT_NEAR(l[1], 0.25, 1e-15);
  EXPECT_NEAR(l[2], 0.25, 1e-15);
  EXPECT_THROW(softmax_masked({1, 2}, {false, false}), ConfigError);
}

TEST(SoftmaxTest, ShiftInvariantAndMaskedExactlyZero) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> logits(6);
    std::vector<bool> mask(6);
    for (int i = 0; i < 6; ++i) {
      logits[i] = n(rng);
      mask[i] = i == 0 || rng() % 3 != 0;
    }
    const double c = n(rng) * 10.0;
    std::vector<double> shifted = logits;
    for (double &x : shifted) x += c;
    const auto p = softmax_masked(logits, mask);
    const auto q = softmax_masked(shifted, mask);
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      EXPECT_NEAR(p[i], q[i], 1e-9);
      if (!mask[i]) EXPECT_EQ(p[i], 0.0);
      sum += p[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(CrossEntropyTest, Examples) {
  EXPECT_EQ(cross_entropy({1.0, 0.0}, {true, true}, 0), 0.0);
  EXPECT_NEAR(cross_entropy({0.5, 0.5}, {true, true}, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(cross_entropy({1.0, 0.0}, {true, true}, 1), -std::log(1e-12), 1e-9);
  EXPECT_THROW(cross_entropy({1.0, 0.0}, {true, false}, 1), ConfigError);
}

TEST(CrossEntropyTest, LogitGradientIsProbsMinusOneHot) {
  const std::vector<double> logits = {0.3, -1.2, 0.8, 0.0};
  const std::vector<bool> mask = {true, true, false, true};
  const int label = 1;
  const auto p = softmax_masked(logits, mask);
  for (int i = 0; i < 4; ++i) {
    if (!mask[i]) continue;
    auto plus = logits, minus = logits;
    plus[i] += 1e-6;
    minus[i] -= 1e-6;
    const double numeric = (cross_entropy(softmax_masked(plus, mask), mask, label) -
                            cross_entropy(softmax_masked(minus, mask), mask, label)) /
                           2e-6;
    EXPECT_NEAR(numeric, p[i] - (i == label ? 1.0 : 0.0), 1e-8);
  }
}

TEST(SoftmaxTest, BackwardMatchesFiniteDifferences) {
  const std::vector<double> logits = {0.3, -1.2, 0.8, 0.0};
  const std::vector<bool> mask = {true, false, true, true};
  const std::vector<double> w = {0.7, 9.0, -0.4, 1.3};
  auto f = [&](const std::vector<double> &l) {
    const auto p = softmax_masked(l, mask);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += w[i] * p[i];
    return s;
  };
  const auto p = softmax_masked(logits, mask);
  const auto g = softmax_backward(p, mask, w);
  for (int i = 0; i < 4; ++i) {
    auto plus = logits, minus = logits;
    plus[i] += 1e-6;
    minus[i] -= 1e-6;
    EXPECT_NEAR(g[i], (f(plus) - f(minus)) / 2e-6, 1e-8);
  }
  EXPECT_EQ(g[1], 0.0);
}

TEST(AdamTest, ZeroGradientsLeaveParametersUnchanged) {
  ParameterStore store(1);
  const ParamId w = store.add("w", {3, 2}, Init::kXavier);
  const Tensor before = store.value(w);
  AdamState state(store, AdamConfig{});
  adam_step(&store, &state);
  EXPECT_EQ(store.value(w), before);
  EXPECT_EQ(state.step, 1);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  ParameterStore store(1);
  const ParamId w = store.add("w", {4}, Init::kXavier);
  const Tensor before = store.value(w);
  const std::vector<double> g = {0.3, -2.0, 1e-3, -5e-2};
  for (int i = 0; i < 4; ++i) store.grad(w).values()[i] = g[i];
  AdamConfig cfg;
  cfg.learning_rate = 0.01;
  AdamState state(store, cfg);
  adam_step(&store, &state);
  for (int i = 0; i < 4; ++i) {
    const double moved = store.value(w).values()[i] - before.values()[i];
    const double expected = -0.01 * (g[i] > 0 ? 1.0 : -1.0);
    EXPECT_NEAR(moved, expected, 1e-6);
    EXPECT_EQ(store.grad(w).values()[i], 0.0);
  }
}

TEST(AdamTest, TwoStepsMatchReferenceRecurrence) {
  ParameterStore store(1);
  const ParamId w = store.add("w", {1}, Init::kZero);
  store.value(w).values()[0] = 0.5;
  AdamConfig cfg;
  cfg.learning_rate = 0.1;
  AdamState state(store, cfg);
  double theta = 0.5, m = 0.0, v = 0.0;
  const double grads[] = {0.8, -0.3};
  for (int t = 1; t <= 2; ++t) {
    store.grad(w).values()[0] = grads[t - 1];
    adam_step(&store, &state);
    m = 0.9 * m + 0.1 * grads[t - 1];
    v = 0.999 * v + 0.001 * grads[t - 1] * grads[t - 1];
    const double mhat = m / (1.0 - std::pow(0.9, t));
    const double vhat = v / (1.0 - std::pow(0.999, t));
    theta -= 0.1 * mhat / (std::sqrt(vhat) + 1e-8);
    EXPECT_NEAR(store.value(w).values()[0], theta, 1e-12);
  }
}

TEST(AdamTest, RejectsNonPositiveLearningRate) {
  ParameterStore store(1);
  store.add("w", {1}, Init::kZero);
  AdamConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(AdamState(store, cfg), ConfigError);
}

TEST(GradientCheckTest, LinearModelIsExact) {
  ParameterStore store(1);
  const ParamId w = store.add("w", {5, 3}, Init::kXavier);
  LossFunction loss = [&](ParameterStore *s, bool with_gradients) {
    if (with_gradients) {
      for (double &g : s->grad(w).values()) g += 1.0;
    }
    return s->value(w).vector().sum();
  };
  EXPECT_LT(gradient_check(loss, &store).max_relative_error, 1e-10);
}

TEST(GradientCheckTest, DetectsWrongGradient) {
  ParameterStore store(1);
  const ParamId w = store.add("w", {3}, Init::kXavier);
  LossFunction loss = [&](ParameterStore *s, bool with_gradients) {
    if (with_gradients) {
      for (double &g : s->grad(w).values()) g += 2.0;
    }
    return s->value(w).vector().sum();
  };
  EXPECT_GT(gradient_check(loss, &store).max_relative_error, 0.1);
}

TEST(GradientCheckTest, ZeroEpsilonIsAnError) {
  ParameterStore store(1);
  store.add("w", {3}, Init::kXavier);
  LossFunction loss = [](ParameterStore *, bool) { return 0.0; };
  GradientCheckOptions opts;
  opts.epsilon = 0.0;
  EXPECT_THROW(gradient_check(loss, &store, opts), ConfigError);
}

TEST(GradientCheckTest, NonFiniteLossIsNumericalError) {
  ParameterStore store(1);
  store.add("w", {3}, Init::kXavier);
  LossFunction loss = [](ParameterStore *, bool) { return std::nan(""); };
  EXPECT_THROW(gradient_check(loss, &store), NumericalError);
}

TEST(InitTest, PureFunctionOfSeedNameShape) {
  const auto a = init_values(7, "enc.w", {4, 6}, Init::kXavier);
  EXPECT_EQ(a, init_values(7, "enc.w", {4, 6}, Init::kXavier));
  EXPECT_NE(a, init_values(8, "enc.w", {4, 6}, Init::kXavier));
  EXPECT_NE(a, init_values(7, "enc.v", {4, 6}, Init::kXavier));
  const double bound = std::sqrt(6.0 / 10.0);
  for (double x : a) EXPECT_LE(std::abs(x), bound);
  for (double x : init_values(7, "emb", {5, 9}, Init::kEmbedding)) EXPECT_LE(std::abs(x), 0.1);
  for (double x : init_values(7, "b", {5}, Init::kZero)) EXPECT_EQ(x, 0.0);
}

TEST(ParameterStoreTest, DuplicateNamesRejected) {
  ParameterStore store(1);
  store.add("w", {2}, Init::kZero);
  EXPECT_THROW(store.add("w", {2}, Init::kZero), ConfigError);
}

TEST(ParamJsonTest, Float64RoundTripIsBitExact) {
  ParameterStore a(1);
  a.add("x", {3, 2}, Init::kXavier);
  a.add("y", {4}, Init::kEmbedding);
  randomize(&a, 12);
  ParameterStore b(2);
  b.add("x", {3, 2}, Init::kZero);
  b.add("y", {4}, Init::kZero);
  params_from_json(nlohmann::json::parse(params_to_json(a, Precision::kFloat64).dump()), &b);
  for (ParamId id : a.ids()) EXPECT_EQ(a.value(id), b.value(id));
}

TEST(ParamJsonTest, Float32RoundTripAtStoredPrecision) {
  ParameterStore a(1);
  a.add("x", {5}, Init::kEmbedding);
  ParameterStore b(2);
  b.add("x", {5}, Init::kZero);
  const auto j = params_to_json(a, Precision::kFloat32);
  EXPECT_EQ(j["precision"], "float32");
  params_from_json(nlohmann::json::parse(j.dump()), &b);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(b.value(ParamId{0}).values()[i],
              static_cast<double>(static_cast<float>(a.value(ParamId{0}).values()[i])));
  }
}

TEST(ParamJsonTest, ShapeMismatchAndMissingParametersFail) {
  ParameterStore a(1);
  a.add("x", {3}, Init::kXavier);
  const auto j = nlohmann::json::parse(params_to_json(a, Precision::kFloat64).dump());
  ParameterStore wrong_shape(1);
  wrong_shape.add("x", {4}, Init::kZero);
  EXPECT_THROW(params_from_json(j, &wrong_shape), DataError);
  ParameterStore extra(1);
  extra.add("x", {3}, Init::kZero);
  extra.add("z", {1}, Init::kZero);
  EXPECT_THROW(params_from_json(j, &extra), DataError);
}

}  // namespace
}  // namespace sdst
