#include <gtest/gtest.h>

#include <cmath>

#include "sdst/errors.h"
#include "sdst/evaluation.h"
#include "sdst/ops.h"
#include "sdst/synthetic.h"
#include "sdst/tracker.h"
#include "sdst/training.h"
#include "test_util.h"

namespace sdst {
namespace {

using testing::toy_dialogue;
using testing::toy_schema;

ValueSlate slate_of(const std::vector<std::string> &values, int capacity = 4) {
  ScoredCandidateSet cs("time", capacity);
  for (const auto &v : values) cs.try_add(v, 0.0);
  return ValueSlate(cs);
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.embedding_dim = 8;
  cfg.gru_hidden_dim = 8;
  cfg.scorer_hidden_dim = 8;
  cfg.learning_rate = 0.01;
  cfg.max_epochs = 3;
  cfg.patience = 2;
  cfg.capacity = 4;
  return cfg;
}

Corpus toy_corpus(int n) {
  Corpus c;
  c.schema = toy_schema();
  for (int i = 0; i < n; ++i) c.train.push_back(toy_dialogue("toy-train-" + std::to_string(i)));
  c.dev = {toy_dialogue("toy-dev-0")};
  c.test = {toy_dialogue("toy-test-0")};
  return c;
}

Corpus small_generated(const std::string &schema, uint64_t seed) {
  GenConfig g;
  g.n_train = 20;
  g.n_dev = 10;
  g.n_test = 10;
  g.oov_tolerance = 0.5;
  g.seed = seed;
  return generate_corpus(builtin_schema(schema), g);
}

TEST(GoldLabelTest, Positions) {
  const ValueSlate slate = slate_of({"6 pm", "7 pm"});
  bool miss = true;
  EXPECT_EQ(gold_label(slate, StateValue::value("7 pm"), SlateMissPolicy::kSkip, &miss), 1);
  EXPECT_FALSE(miss);
  EXPECT_EQ(gold_label(slate, StateValue::dontcare(), SlateMissPolicy::kSkip, &miss), 4);
  EXPECT_EQ(gold_label(slate, StateValue::unset(), SlateMissPolicy::kSkip, &miss), 5);
  EXPECT_FALSE(miss);
  EXPECT_EQ(gold_label(slate, StateValue::value("8 pm"), SlateMissPolicy::kSkip, &miss), -1);
  EXPECT_TRUE(miss);
  miss = false;
  EXPECT_EQ(gold_label(slate, StateValue::value("8 pm"), SlateMissPolicy::kMapToNull, &miss),
            5);
  EXPECT_TRUE(miss);
}

TEST(MakeExamplesTest, LabelsEverySlotTurn) {
  const ExampleSet set =
      make_examples({toy_dialogue()}, toy_schema(), 7, SlateMissPolicy::kSkip);
  EXPECT_EQ(set.slot_turns, 6);
  EXPECT_EQ(set.misses, 0);
  ASSERT_EQ(set.examples.size(), 6u);
  for (const Example &e : set.examples) {
    if (e.turn == 1 && e.slot == "time") EXPECT_EQ(e.label, 0);  // "7 pm" leads the slate
    if (e.slot == "area") EXPECT_EQ(e.label, 8);
  }
}

TEST(MakeExamplesTest, MissesFollowPolicy) {
  Dialogue d = toy_dialogue();
  d.turns[0].gold_state["area"] = StateValue::value("north");  // never mentioned
  const ExampleSet skip = make_examples({d}, toy_schema(), 7, SlateMissPolicy::kSkip);
  EXPECT_EQ(skip.misses, 1);
  EXPECT_EQ(skip.examples.size(), 5u);
  EXPECT_NEAR(skip.miss_rate(), 1.0 / 6.0, 1e-15);
  const ExampleSet null = make_examples({d}, toy_schema(), 7, SlateMissPolicy::kMapToNull);
  EXPECT_EQ(null.misses, 1);
  EXPECT_EQ(null.examples.size(), 6u);
}

TEST(DialogueLossTest, EqualsSumOfCrossEntropies) {
  const Corpus c = toy_corpus(1);
  const TrackerModel m = build_model(small_config(), {&c}, {&c.schema});
  const Dialogue d = toy_dialogue();
  const DialogueLoss l = dialogue_loss(m, d, SlateMissPolicy::kSkip, nullptr);
  const auto dists = track_distributions(d, m);
  double expected = 0.0;
  for (size_t t = 0; t < d.turns.size(); ++t) {
    for (const auto &[slot, dist] : dists[t]) {
      bool miss = false;
      const int label = gold_label(dist.slate, state_of(d.turns[t].gold_state, slot),
                                   SlateMissPolicy::kSkip, &miss);
      expected += cross_entropy(dist.probs, dist.slate.mask(), label);
    }
  }
  EXPECT_NEAR(l.loss, expected, 1e-12);
  EXPECT_EQ(l.instances, 6);
  EXPECT_EQ(l.slot_turns, 6);
}

TEST(GradientCheck, TrackerLossSmallDims) {
  const GradientCheckResult r = tracker_gradient_check(8, 3);
  EXPECT_LT(r.max_relative_error, 1e-5) << r.worst_parameter;
  EXPECT_GT(r.elements_checked, 100);
}

TEST(BuildModelTest, SharedParameterCountIndependentOfSlots) {
  TrainConfig cfg = small_config();
  const Corpus three = toy_corpus(1);
  Corpus five = three;
  five.schema.slots = {"area", "food", "time", "x_slot", "y_slot"};
  const TrackerModel a = build_model(cfg, {&three}, {&three.schema});
  const TrackerModel b = build_model(cfg, {&five}, {&five.schema});
  // Only the two extra delex embeddings differ.
  EXPECT_EQ(b.store().num_elements() - a.store().num_elements(), 2L * cfg.embedding_dim);
  cfg.sharing = SharingMode::kPerSlot;
  const TrackerModel c = build_model(cfg, {&three}, {&three.schema});
  EXPECT_EQ(c.num_scorers(), 3);
}

TEST(BuildModelTest, VocabularyComesFromTrainOnly) {
  Corpus c = toy_corpus(1);
  c.test[0].turns[0].user_tokens[5] = "zebra";
  const TrackerModel m = build_model(small_config(), {&c}, {&c.schema});
  EXPECT_FALSE(m.vocab().contains("zebra"));
  EXPECT_TRUE(m.vocab().contains("delex(area)"));
}

TEST(FitTest, DeterministicAndLossDecreases) {
  const Corpus c = small_generated("restaurant", 4);
  TrainConfig cfg = small_config();
  cfg.max_epochs = 2;
  cfg.patience = 5;
  const TrainResult a = train(c, cfg);
  const TrainResult b = train(c, cfg);
  EXPECT_EQ(model_to_string(a.model), model_to_string(b.model));
  EXPECT_EQ(history_to_jsonl(a.history), history_to_jsonl(b.history));
  ASSERT_GE(a.history.epochs.size(), 2u);
  EXPECT_EQ(a.history.epochs[0].epoch, 0);
  EXPECT_LT(a.history.epochs[1].train_loss, a.history.epochs[0].train_loss);
  const EpochRecord &chosen = a.history.epochs[a.history.chosen_epoch];
  EXPECT_EQ(a.model.threshold(), chosen.threshold);
  for (const EpochRecord &e : a.history.epochs) EXPECT_LE(e.dev_jga, chosen.dev_jga);
}

TEST(FitTest, SeedChangesModel) {
  const Corpus c = toy_corpus(2);
  TrainConfig cfg = small_config();
  cfg.max_epochs = 1;
  const std::string a = model_to_string(train(c, cfg).model);
  cfg.seed = 2;
  EXPECT_NE(a, model_to_string(train(c, cfg).model));
}

TEST(FitTest, HistoryJsonlHasOneLinePerEpoch) {
  TrainHistory h;
  h.epochs = {{0, 2.5, 0.1, 0.5}, {1, 1.25, 0.5, 0.3}};
  const std::string text = history_to_jsonl(h);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("\"epoch\":1"), std::string::npos);
  EXPECT_NE(text.find("\"train_loss\""), std::string::npos);
  EXPECT_NE(text.find("\"dev_jga\""), std::string::npos);
}

TEST(TrainTest, EmptySplitsRejected) {
  Corpus c = toy_corpus(1);
  c.dev.clear();
  EXPECT_THROW(train(c, small_config()), ConfigError);
  TrainConfig bad = small_config();
  bad.learning_rate = -1.0;
  EXPECT_THROW(train(toy_corpus(1), bad), ConfigError);
}

TEST(GridSearchTest, SingleCellAndTieBreak) {
  const Corpus c = toy_corpus(2);
  TrainConfig base = small_config();
  base.max_epochs = 1;
  GridSpec grid;
  grid.embedding_dims = {4, 6};
  grid.hidden_dims = {4};
  grid.learning_rates = {0.01};
  const GridResult r = grid_search(c, base, grid);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_EQ(r.cells[0].config.embedding_dim, 4);
  EXPECT_EQ(r.cells[1].config.embedding_dim, 6);
  EXPECT_EQ(r.cells[0].config.gru_hidden_dim, 4);
  EXPECT_EQ(r.cells[0].config.scorer_hidden_dim, 4);
  ASSERT_TRUE(r.best_model.has_value());
  const double best = r.cells[r.best].dev_jga;
  for (int i = 0; i < static_cast<int>(r.cells.size()); ++i) {
    if (i < r.best) EXPECT_LT(r.cells[i].dev_jga, best);
    if (i > r.best) EXPECT_LE(r.cells[i].dev_jga, best);
  }
  const std::string tsv = format_grid_results(r);
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 3);
}

TEST(GridSearchTest, ParseGrid) {
  const KeyValues kv = KeyValues::parse(
      "embedding_dim = 10, 20\nhidden_dim=5\nlearning_rate=0.1,0.01\nmax_epochs=4\n", "g.cfg");
  GridSpec grid;
  TrainConfig base;
  parse_grid(kv, &grid, &base);
  EXPECT_EQ(grid.embedding_dims, (std::vector<int>{10, 20}));
  EXPECT_EQ(grid.hidden_dims, (std::vector<int>{5}));
  EXPECT_EQ(grid.learning_rates, (std::vector<double>{0.1, 0.01}));
  EXPECT_EQ(base.max_epochs, 4);
  EXPECT_THROW(parse_grid(KeyValues::parse("bogus=1\n", "g.cfg"), &grid, &base), ConfigError);
}

TEST(TransferTest, RequiresSharedModeAndForeignDomain) {
  const Corpus a = small_generated("restaurant", 1);
  const Corpus b = small_generated("movie", 1);
  TrainConfig cfg = small_config();
  cfg.max_epochs = 1;
  cfg.sharing = SharingMode::kPerSlot;
  EXPECT_THROW(transfer_eval({a}, b, cfg, TransferMode::kZeroShot), ConfigError);
  cfg.sharing = SharingMode::kShared;
  EXPECT_THROW(transfer_eval({b}, b, cfg, TransferMode::kZeroShot), ConfigError);
  const TransferResult r = transfer_eval({a}, b, cfg, TransferMode::kZeroShot);
  EXPECT_EQ(r.report.turns, [&] {
    int n = 0;
    for (const Dialogue &d : b.test) n += static_cast<int>(d.turns.size());
    return n;
  }());
  EXPECT_EQ(r.all_null_jga, all_null_jga(b.test));
  EXPECT_NE(format_transfer_report(r, TransferMode::kZeroShot).find("zero_shot"),
            std::string::npos);
}

TEST(TransferTest, ModeNames) {
  EXPECT_EQ(parse_transfer_mode("zero_shot"), TransferMode::kZeroShot);
  EXPECT_EQ(parse_transfer_mode("joint"), TransferMode::kJoint);
  EXPECT_EQ(to_string(TransferMode::kJoint), "joint");
  EXPECT_THROW(parse_transfer_mode("few_shot"), ConfigError);
}

}  // namespace
}  // namespace sdst
