#ifndef SDST_TRAINING_H_
#define SDST_TRAINING_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdst/config.h"
#include "sdst/corpus.h"
#include "sdst/evaluation.h"
#include "sdst/gradient_check.h"
#include "sdst/tracker_model.h"

namespace sdst {

// Slate position of the gold state: the value's index, the dontcare position,
// or the null position. A value missing from the slate gives -1 under kSkip
// and the null position under kMapToNull; `*miss` reports either case.
int gold_label(const ValueSlate &slate, const StateValue &gold, SlateMissPolicy policy,
               bool *miss);

struct Example {
  int dialogue = 0;  // index into the split
  int turn = 0;
  std::string slot;
  int label = 0;
};

struct ExampleSet {
  std::vector<Example> examples;
  int slot_turns = 0;
  int misses = 0;
  double miss_rate() const { return slot_turns ? static_cast<double>(misses) / slot_turns : 0.0; }
};

// Replays the candidate pipeline with gold-state scores (1 for the gold value,
// 0 otherwise) and labels every (dialogue, turn, slot).
ExampleSet make_examples(const std::vector<Dialogue> &split, const DomainSchema &schema,
                         int capacity, SlateMissPolicy policy);

struct DialogueLoss {
  double loss = 0.0;  // sum of cross entropies over emitted instances
  int instances = 0;
  int slot_turns = 0;
  int misses = 0;
};

// On-policy forward pass over the whole dialogue. When `grads` is non-null
// the gradient of the loss is accumulated into it.
DialogueLoss dialogue_loss(const TrackerModel &model, const Dialogue &d,
                           SlateMissPolicy policy, Gradients *grads);

// Vocabulary over the train splits of `corpora`, delex tokens for every slot
// of every domain in `domains`, and the merged act inventory of `corpora`.
TrackerModel build_model(const TrainConfig &cfg, const std::vector<const Corpus *> &corpora,
                         const std::vector<const DomainSchema *> &domains);

struct EpochRecord {
  int epoch = 0;  // 0 is the untrained model
  double train_loss = 0.0;
  double dev_jga = 0.0;
  double threshold = kDefaultThreshold;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  int chosen_epoch = 0;
  double slate_miss_rate = 0.0;
};

// One JSON object per line: {"epoch", "train_loss", "dev_jga"}.
std::string history_to_jsonl(const TrainHistory &h);

struct TrainResult {
  TrackerModel model;
  TrainHistory history;
};

// Trains `model` in place on `train`, selects the epoch with the best tuned
// dev joint goal accuracy, restores that snapshot and sets its threshold.
// Stops after `patience` epochs without improvement or on a perfect dev score.
TrainHistory fit(TrackerModel *model, const std::vector<Dialogue> &train,
                 const std::vector<Dialogue> &dev, const TrainConfig &cfg);

// Throws ConfigError when either split is empty.
TrainResult train(const Corpus &corpus, const TrainConfig &cfg);

struct GridSpec {
  std::vector<int> embedding_dims{50, 75, 100};
  std::vector<int> hidden_dims{50, 75, 100};  // GRU and scorer hidden size
  std::vector<double> learning_rates{0.001, 0.01, 0.1};
};

// Keys embedding_dim, hidden_dim, learning_rate (comma lists); anything else
// is a base TrainConfig field.
void parse_grid(const KeyValues &kv, GridSpec *grid, TrainConfig *base);

struct GridCell {
  TrainConfig config;
  double dev_jga = 0.0;
  int chosen_epoch = 0;
};

struct GridResult {
  std::vector<GridCell> cells;  // embedding-major, then hidden, then lr
  int best = 0;
  std::optional<TrackerModel> best_model;
};

// Ties go to the smaller embedding size, then smaller hidden size, then lower
// learning rate.
GridResult grid_search(const Corpus &corpus, const TrainConfig &base, const GridSpec &grid);

std::string format_grid_results(const GridResult &r);

enum class TransferMode { kZeroShot, kJoint };

std::string to_string(TransferMode m);
TransferMode parse_transfer_mode(const std::string &text);

struct TransferResult {
  MetricsReport report;  // on the eval corpus test split
  double all_null_jga = 0.0;
  TrainHistory history;
};

// Trains one shared-mode model on the train splits of `train_corpora` (plus
// the eval corpus in joint mode) and evaluates it on the eval corpus test
// split with the shared scorer replicated for every eval slot. Zero-shot mode
// rejects train corpora from the eval domain.
TransferResult transfer_eval(const std::vector<Corpus> &train_corpora, const Corpus &eval,
                             const TrainConfig &cfg, TransferMode mode);

std::string format_transfer_report(const TransferResult &r, TransferMode mode);

// Two-turn dialogue over a three-slot toy domain used by the gradient check.
Corpus gradient_check_corpus();

// Full tracker loss on gradient_check_corpus(), hidden and embedding size
// `dim`, capacity `capacity`.
GradientCheckResult tracker_gradient_check(int dim, int capacity, uint64_t seed = 7);

}  // namespace sdst

#endif  // SDST_TRAINING_H_
