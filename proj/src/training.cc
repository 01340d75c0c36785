#include "sdst/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>


#include "json.hpp"
#include "sdst/adam.h"
#include "sdst/candidate_set.h"
#include "sdst/errors.h"
#include "sdst/ops.h"
#include "sdst/tracker.h"

namespace sdst {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::vector<Tensor> snapshot(const ParameterStore &store) {
  std::vector<Tensor> out;
  for (ParamId id : store.ids()) out.push_back(store.value(id));
  return out;
}

void restore(const std::vector<Tensor> &values, ParameterStore *store) {
  const auto ids = store->ids();
  for (size_t i = 0; i < ids.size(); ++i) store->value(ids[i]) = values[i];
}

}  // namespace

int gold_label(const ValueSlate &slate, const StateValue &gold, SlateMissPolicy policy,
               bool *miss) {
  *miss = false;
  switch (gold.kind()) {
    case StateKind::kUnset:
      return slate.null_index();
    case StateKind::kDontcare:
      return slate.dontcare_index();
    case StateKind::kValue:
      break;
  }
  const int i = slate.find(gold.text());
  if (i >= 0) return i;
  *miss = true;
  return policy == SlateMissPolicy::kSkip ? -1 : slate.null_index();
}

ExampleSet make_examples(const std::vector<Dialogue> &split, const DomainSchema &schema,
                         int capacity, SlateMissPolicy policy) {
  ExampleSet out;
  for (size_t di = 0; di < split.size(); ++di) {
    const Dialogue &d = split[di];
    std::map<std::string, ScoredCandidateSet> sets;
    for (const auto &slot : schema.slots) sets.emplace(slot, ScoredCandidateSet(slot, capacity));
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const Turn &turn = d.turns[t];
      for (const auto &slot : schema.slots) {
        std::vector<std::string> user, system;
        slot_mentions(turn, slot, &user, &system);
        CandidateUpdate update = update_candidate_set(sets.at(slot), user, system, {}, capacity);
        const StateValue gold = state_of(turn.gold_state, slot);
        const ValueSlate slate(update.set);
        bool miss = false;
        const int label = gold_label(slate, gold, policy, &miss);
        ++out.slot_turns;
        if (miss) ++out.misses;
        if (label >= 0) {
          out.examples.push_back({static_cast<int>(di), static_cast<int>(t), slot, label});
        }
        for (int i = 0; i < update.set.size(); ++i) {
          const bool is_gold = gold.is_value() && update.set.entries()[i].value == gold.text();
          update.set.set_score(i, is_gold ? 1.0 : 0.0);
        }
        sets.at(slot) = std::move(update.set);
      }
    }
  }
  return out;
}

DialogueLoss dialogue_loss(const TrackerModel &model, const Dialogue &d,
                           SlateMissPolicy policy, Gradients *grads) {
  DialogueLoss out;
  const std::vector<std::string> &slots = model.slots_for(d.domain);
  std::vector<TurnTrace> traces(d.turns.size());
  std::vector<std::vector<int>> labels(d.turns.size());
  TurnTrackState state = initial_track_state(model, slots);
  for (size_t t = 0; t < d.turns.size(); ++t) {
    state = track_turn(state, d.turns[t], model, &traces[t]);
    for (size_t i = 0; i < slots.size(); ++i) {
      const Distribution &dist = state.slots.at(slots[i]).distribution;
      bool miss = false;
      const int label =
          gold_label(dist.slate, state_of(d.turns[t].gold_state, slots[i]), policy, &miss);
      ++out.slot_turns;
      if (miss) ++out.misses;
      if (label >= 0) {
        out.loss += cross_entropy(dist.probs, traces[t].slots[i].score.mask, label);
        ++out.instances;
      }
      labels[t].push_back(label);
    }
  }
  if (grads) backward_turns(model, traces, labels, grads);
  return out;
}

TrackerModel build_model(const TrainConfig &cfg, const std::vector<const Corpus *> &corpora,
                         const std::vector<const DomainSchema *> &domains) {
  std::vector<const std::vector<Dialogue> *> train;
  std::vector<ActInventory> acts;
  for (const Corpus *c : corpora) {
    train.push_back(&c->train);
    acts.emplace_back(c->schema.user_act_inventory, c->schema.system_act_inventory);
  }
  std::map<std::string, std::vector<std::string>> domain_slots;
  std::set<std::string> all_slots;
  for (const DomainSchema *s : domains) {
    auto [it, inserted] = domain_slots.emplace(s->domain, s->slots);
    if (!inserted && it->second != s->slots) {
      throw ConfigError("domain '" + s->domain + "' appears with two different slot lists");
    }
    all_slots.insert(s->slots.begin(), s->slots.end());
  }
  Vocabulary vocab = build_vocab(train, {all_slots.begin(), all_slots.end()}, cfg.min_count);
  return TrackerModel(cfg.model_config(), std::move(vocab), ActInventory::merge(acts),
                      std::move(domain_slots));
}

std::string history_to_jsonl(const TrainHistory &h) {
  std::string out;
  for (const auto &e : h.epochs) {
    nlohmann::ordered_json j;
    j["epoch"] = e.epoch;
    j["train_loss"] = e.train_loss;
    j["dev_jga"] = e.dev_jga;
    out += j.dump() + "\n";
  }
  return out;
}

TrainHistory fit(TrackerModel *model, const std::vector<Dialogue> &train,
                 const std::vector<Dialogue> &dev, const TrainConfig &cfg) {
  cfg.validate();
  if (train.empty()) throw ConfigError("training split is empty");
  if (dev.empty()) throw ConfigError("dev split is empty");
  ParameterStore &store = model->store();
  AdamConfig adam_cfg;
  adam_cfg.learning_rate = cfg.learning_rate;
  AdamState adam(store, adam_cfg);
  std::mt19937_64 rng(cfg.seed);
  const std::vector<double> grid = default_threshold_grid();

  TrainHistory history;
  auto dev_choice = [&] { return tune_threshold(*model, dev, grid); };

  EpochRecord initial;
  int slot_turns = 0;
  int misses = 0;
  for (const Dialogue &d : train) {
    const DialogueLoss l = dialogue_loss(*model, d, cfg.slate_miss_policy, nullptr);
    initial.train_loss += l.loss;
    slot_turns += l.slot_turns;
    misses += l.misses;
  }
  ThresholdChoice choice = dev_choice();
  initial.dev_jga = choice.jga;
  initial.threshold = choice.threshold;
  history.epochs.push_back(initial);

  EpochRecord best = initial;
  std::vector<Tensor> best_values = snapshot(store);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  int since_best = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (best.dev_jga >= 1.0) break;
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    rec.epoch = epoch;
    slot_turns = 0;
    misses = 0;
    int batch = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch) {
      const size_t stop = std::min(order.size(), start + cfg.batch_size);
      store.zero_grad();
      double batch_loss = 0.0;
      for (size_t k = start; k < stop; ++k) {
        const DialogueLoss l =
            dialogue_loss(*model, train[order[k]], cfg.slate_miss_policy, &store.grads());
        batch_loss += l.loss;
        slot_turns += l.slot_turns;
        misses += l.misses;
      }
      if (!std::isfinite(batch_loss)) {
        std::string ids;
        for (size_t k = start; k < stop; ++k) ids += (k > start ? "," : "") + train[order[k]].id;
        throw NumericalError("non-finite loss in epoch " + std::to_string(epoch) + " batch " +
                             std::to_string(batch) + " (dialogues " + ids + ")");
      }
      rec.train_loss += batch_loss;
      adam_step(&store, &adam);
    }
    choice = dev_choice();
    rec.dev_jga = choice.jga;
    rec.threshold = choice.threshold;
    history.epochs.push_back(rec);
    if (rec.dev_jga > best.dev_jga) {
      best = rec;
      best_values = snapshot(store);
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  restore(best_values, &store);
  model->set_threshold(best.threshold);
  history.chosen_epoch = best.epoch;
  history.slate_miss_rate = slot_turns ? static_cast<double>(misses) / slot_turns : 0.0;
  return history;
}

TrainResult train(const Corpus &corpus, const TrainConfig &cfg) {
  cfg.validate();
  TrackerModel model = build_model(cfg, {&corpus}, {&corpus.schema});
  TrainHistory history = fit(&model, corpus.train, corpus.dev, cfg);
  return {std::move(model), std::move(history)};
}

void parse_grid(const KeyValues &kv, GridSpec *grid, TrainConfig *base) {
  std::map<std::string, std::string> rest;
  for (const auto &[k, v] : kv.values()) {
    if (k != "embedding_dim" && k != "hidden_dim" && k != "learning_rate") rest[k] = v;
  }
  std::string text;
  for (const auto &[k, v] : rest) text += k + "=" + v + "\n";
  *base = train_config_from(KeyValues::parse(text, kv.origin()));
  grid->embedding_dims = kv.get_int_list("embedding_dim", grid->embedding_dims);
  grid->hidden_dims = kv.get_int_list("hidden_dim", grid->hidden_dims);
  grid->learning_rates = kv.get_double_list("learning_rate", grid->learning_rates);
}

GridResult grid_search(const Corpus &corpus, const TrainConfig &base, const GridSpec &grid) {
  if (grid.embedding_dims.empty() || grid.hidden_dims.empty() || grid.learning_rates.empty()) {
    throw ConfigError("hyperparameter grid is empty");
  }
  GridResult out;
  auto key = [](const TrainConfig &c) {
    return std::make_tuple(c.embedding_dim, c.gru_hidden_dim, c.learning_rate);
  };
  for (int emb : grid.embedding_dims) {
    for (int hidden : grid.hidden_dims) {
      for (double lr : grid.learning_rates) {
        TrainConfig cfg = base;
        cfg.embedding_dim = emb;
        cfg.gru_hidden_dim = hidden;
        cfg.scorer_hidden_dim = hidden;
        cfg.learning_rate = lr;
        TrainResult r = train(corpus, cfg);
        GridCell cell;
        cell.config = cfg;
        cell.chosen_epoch = r.history.chosen_epoch;
        cell.dev_jga = r.history.epochs.at(cell.chosen_epoch).dev_jga;
        const bool better =
            !out.best_model || cell.dev_jga > out.cells[out.best].dev_jga ||
            (cell.dev_jga == out.cells[out.best].dev_jga &&
             key(cfg) < key(out.cells[out.best].config));
        out.cells.push_back(cell);
        if (better) {
          out.best = static_cast<int>(out.cells.size()) - 1;
          out.best_model.emplace(std::move(r.model));
        }
      }
    }
  }
  return out;
}

std::string format_grid_results(const GridResult &r) {
  std::ostringstream out;
  out << "cell\tembedding_dim\thidden_dim\tlearning_rate\tchosen_epoch\tdev_jga\tbest\n";
  for (size_t i = 0; i < r.cells.size(); ++i) {
    const GridCell &c = r.cells[i];
    char lr[32];
    std::snprintf(lr, sizeof(lr), "%g", c.config.learning_rate);
    out << i << "\t" << c.config.embedding_dim << "\t" << c.config.gru_hidden_dim << "\t" << lr
        << "\t" << c.chosen_epoch << "\t" << fmt(c.dev_jga) << "\t"
        << (static_cast<int>(i) == r.best ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string to_string(TransferMode m) {
  return m == TransferMode::kZeroShot ? "zero_shot" : "joint";
}

TransferMode parse_transfer_mode(const std::string &text) {
  if (text == "zero_shot") return TransferMode::kZeroShot;
  if (text == "joint") return TransferMode::kJoint;
  throw ConfigError("unknown transfer mode '" + text + "' (zero_shot or joint)");
}

TransferResult transfer_eval(const std::vector<Corpus> &train_corpora, const Corpus &eval,
                             const TrainConfig &cfg, TransferMode mode) {
  if (cfg.sharing != SharingMode::kShared) {
    throw ConfigError(
        "transfer requires sharing_mode=shared: per-slot scorers have no parameters for "
        "slots outside the training domains");
  }
  if (train_corpora.empty() && mode == TransferMode::kZeroShot) {
    throw ConfigError("zero-shot transfer needs at least one training corpus");
  }
  std::vector<const Corpus *> used;
  bool eval_included = false;
  for (const Corpus &c : train_corpora) {
    if (c.schema.domain == eval.schema.domain) {
      if (mode == TransferMode::kZeroShot) {
        throw ConfigError("zero-shot transfer: training corpus of domain '" + c.schema.domain +
                          "' matches the eval domain");
      }
      eval_included = true;
    }
    used.push_back(&c);
  }
  if (mode == TransferMode::kJoint && !eval_included) used.push_back(&eval);

  std::vector<const DomainSchema *> schemas;
  std::vector<Dialogue> train_set, dev_set;
  for (const Corpus *c : used) {
    schemas.push_back(&c->schema);
    train_set.insert(train_set.end(), c->train.begin(), c->train.end());
    dev_set.insert(dev_set.end(), c->dev.begin(), c->dev.end());
  }
  if (mode == TransferMode::kZeroShot) schemas.push_back(&eval.schema);

  TrackerModel model = build_model(cfg, used, schemas);
  TransferResult out;
  out.history = fit(&model, train_set, dev_set, cfg);
  out.report = evaluate(model, eval.test, model.threshold());
  out.all_null_jga = all_null_jga(eval.test);
  return out;
}

std::string format_transfer_report(const TransferResult &r, TransferMode mode) {
  std::ostringstream out;
  out << "mode=" << to_string(mode) << "\n";
  out << "chosen_epoch=" << r.history.chosen_epoch << "\n";
  out << "all_null_joint_goal_accuracy=" << fmt(r.all_null_jga) << "\n";
  out << format_report(r.report);
  return out.str();
}

Corpus gradient_check_corpus() {
  Corpus c;
  c.schema.domain = "toy";
  c.schema.slots = {"area", "food", "time"};
  c.schema.user_act_inventory = {"inform", "negate", "dontcare", "affirm"};
  c.schema.system_act_inventory = {"request", "confirm", "inform"};

  Dialogue d;
  d.id = "gradcheck-0";
  d.domain = "toy";
  Turn t1;
  t1.user_tokens = tokenize("thai food in the north please");
  t1.user_spans = {{"food", "thai", 0, 1}, {"area", "north", 4, 5}};
  t1.user_acts = {{"inform", "food", "thai"}, {"inform", "area", "north"}};
  t1.gold_state = {{"food", StateValue::value("thai")}, {"area", StateValue::value("north")}};
  Turn t2;
  t2.system_tokens = tokenize("what time ? how about 7 pm");
  t2.system_spans = {{"time", "7 pm", 5, 7}};
  t2.system_acts = {{"request", "time", std::nullopt}, {"inform", "time", "7 pm"}};
  t2.user_tokens = tokenize("no , 6 pm and any area is fine");
  t2.user_spans = {{"time", "6 pm", 2, 4}};
  t2.user_acts = {{"negate", "time", "7 pm"}, {"inform", "time", "6 pm"},
                  {"dontcare", "area", std::nullopt}};
  t2.gold_state = {{"food", StateValue::value("thai")},
                   {"area", StateValue::dontcare()},
                   {"time", StateValue::value("6 pm")}};
  d.turns = {t1, t2};
  c.train = {d};
  c.dev = {d};
  return c;
}

GradientCheckResult tracker_gradient_check(int dim, int capacity, uint64_t seed) {
  const Corpus corpus = gradient_check_corpus();
  TrainConfig cfg;
  cfg.embedding_dim = dim;
  cfg.gru_hidden_dim = dim;
  cfg.scorer_hidden_dim = dim;
  cfg.capacity = capacity;
  cfg.seed = seed;
  cfg.validate();
  TrackerModel model = build_model(cfg, {&corpus}, {&corpus.schema});
  // Move biases and the null logit off zero so their gradients are generic.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  for (ParamId id : model.store().ids()) {
    for (double &v : model.store().value(id).values()) v += jitter(rng);
  }
  const Dialogue &d = corpus.train.front();
  LossFunction loss = [&](ParameterStore *store, bool with_gradients) {
    return dialogue_loss(model, d, SlateMissPolicy::kSkip,
                         with_gradients ? &store->grads() : nullptr)
        .loss;
  };
  GradientCheckOptions opts;
  opts.seed = seed;
  return gradient_check(loss, &model.store(), opts);
}

}  // namespace sdst
