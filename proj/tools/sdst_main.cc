#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdst/config.h"
#include "sdst/converters.h"
#include "sdst/corpus.h"
#include "sdst/errors.h"
#include "sdst/evaluation.h"
#include "sdst/synthetic.h"
#include "sdst/tracker.h"
#include "sdst/tracker_model.h"
#include "sdst/training.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void write_text(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw sdst::DataError("cannot write " + path.string());
  f << text;
  if (!f) throw sdst::DataError("failed writing " + path.string());
}

void apply_seed_override(uint64_t *seed) {
  if (auto s = sdst::seed_override_from_env()) *seed = *s;
}

// Makes the corpus domain trackable by a loaded model (shared scorers can be
// replicated for unseen slots).
void ensure_domain(sdst::TrackerModel *model, const sdst::DomainSchema &schema) {
  if (!model->domains().count(schema.domain)) model->add_domain(schema.domain, schema.slots);
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Scalable multi-domain dialogue state tracker"};
  app.require_subcommand(1, 1);
  app.footer("Environment: SDST_SEED overrides the RNG seed of generate, train, grid and transfer.");

  // generate
  auto *gen = app.add_subcommand("generate", "Generate a synthetic corpus");
  std::string gen_schema, gen_out, gen_config;
  sdst::GenConfig gcfg;
  double gen_oov = gcfg.target_oov;
  int gen_train = gcfg.n_train, gen_dev = gcfg.n_dev, gen_test = gcfg.n_test;
  uint64_t gen_seed = gcfg.seed;
  gen->add_option("--schema", gen_schema, "Schema JSON file or builtin:restaurant / builtin:movie")
      ->required();
  gen->add_option("--out", gen_out, "Output directory (corpus.jsonl, schema.json, stats.txt)")
      ->required();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--oov", gen_oov, "Target test OOV rate")->capture_default_str();
  gen->add_option("--train", gen_train, "Train dialogues")->capture_default_str();
  gen->add_option("--dev", gen_dev, "Dev dialogues")->capture_default_str();
  gen->add_option("--test", gen_test, "Test dialogues")->capture_default_str();
  gen->add_option("--config", gen_config,
                  "key=value file with further generator settings (flags take precedence)");

  // convert
  auto *conv = app.add_subcommand("convert", "Convert an external dataset to the corpus format");
  std::string conv_format, conv_in, conv_out, conv_domain;
  conv->add_option("--format", conv_format, "dstc2 or simdialogue")
      ->required()
      ->check(CLI::IsMember({"dstc2", "simdialogue"}));
  conv->add_option("--in", conv_in, "Dataset directory")->required();
  conv->add_option("--out", conv_out, "Output corpus file")->required();
  conv->add_option("--domain", conv_domain, "Domain name (default: input directory name)");

  // train
  auto *tr = app.add_subcommand("train", "Train a tracker");
  std::string tr_corpus, tr_config, tr_out, tr_history;
  tr->add_option("--corpus", tr_corpus, "Corpus file")->required();
  tr->add_option("--config", tr_config, "TrainConfig key=value file")->required();
  tr->add_option("--out", tr_out, "Model file")->required();
  tr->add_option("--history", tr_history, "History JSONL (default: <out>.history.jsonl)");

  // grid
  auto *grid = app.add_subcommand("grid", "Grid search over embedding size, hidden size and learning rate");
  std::string grid_corpus, grid_file, grid_out;
  grid->add_option("--corpus", grid_corpus, "Corpus file")->required();
  grid->add_option("--grid", grid_file,
                   "key=value file: embedding_dim, hidden_dim, learning_rate as comma lists "
                   "(defaults 50,75,100 / 50,75,100 / 0.001,0.01,0.1) plus base TrainConfig keys")
      ->required();
  grid->add_option("--out", grid_out, "Output directory (results.tsv, best.cfg, model.json)")
      ->required();

  // eval
  auto *ev = app.add_subcommand("eval", "Evaluate a model on a corpus split");
  std::string ev_model, ev_corpus, ev_split = "test", ev_report;
  double ev_threshold = -1.0;
  ev->add_option("--model", ev_model, "Model file")->required();
  ev->add_option("--corpus", ev_corpus, "Corpus file")->required();
  ev->add_option("--split", ev_split, "train, dev or test")
      ->capture_default_str()
      ->check(CLI::IsMember({"train", "dev", "test"}));
  ev->add_option("--report", ev_report, "key=value report (plus <report>.dialogues.tsv)")
      ->required();
  ev->add_option("--threshold", ev_threshold, "Decision threshold (default: the model's tuned value)");

  // transfer
  auto *tf = app.add_subcommand("transfer", "Train on some domains, evaluate on another");
  std::string tf_train, tf_eval, tf_config, tf_mode, tf_report;
  tf->add_option("--train-corpora", tf_train, "Comma-separated corpus files")->required();
  tf->add_option("--eval-corpus", tf_eval, "Corpus file of the eval domain")->required();
  tf->add_option("--config", tf_config, "TrainConfig key=value file (sharing_mode must be shared)")
      ->required();
  tf->add_option("--mode", tf_mode, "zero_shot or joint")
      ->required()
      ->check(CLI::IsMember({"zero_shot", "joint"}));
  tf->add_option("--report", tf_report, "key=value report")->required();

  // track
  auto *tk = app.add_subcommand("track", "Run a model over annotated dialogues turn by turn");
  std::string tk_model, tk_file, tk_id, tk_out;
  tk->add_option("--model", tk_model, "Model file")->required();
  tk->add_option("--dialogue-file", tk_file, "Corpus file holding the dialogues")->required();
  tk->add_option("--dialogue-id", tk_id, "Only track this dialogue");
  tk->add_option("--out", tk_out, "Write JSONL records here instead of stdout");

  // gradcheck
  auto *gc = app.add_subcommand("gradcheck", "Finite-difference check of the tracker gradients");
  std::string gc_dims = "small";
  gc->add_option("--dims", gc_dims, "small (d=8, K=3) or default (d=50, K=7)")
      ->capture_default_str()
      ->check(CLI::IsMember({"small", "default"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      if (!gen_config.empty()) gcfg = sdst::gen_config_from(sdst::KeyValues::load(gen_config));
      gcfg.target_oov = gen->count("--oov") || gen_config.empty() ? gen_oov : gcfg.target_oov;
      if (gen->count("--train") || gen_config.empty()) gcfg.n_train = gen_train;
      if (gen->count("--dev") || gen_config.empty()) gcfg.n_dev = gen_dev;
      if (gen->count("--test") || gen_config.empty()) gcfg.n_test = gen_test;
      if (gen->count("--seed") || gen_config.empty()) gcfg.seed = gen_seed;
      apply_seed_override(&gcfg.seed);
      const sdst::DomainSchema schema = sdst::resolve_schema(gen_schema);
      sdst::GenReport report;
      const sdst::Corpus c = sdst::generate_corpus(schema, gcfg, &report);
      fs::create_directories(gen_out);
      sdst::write_corpus(c, fs::path(gen_out) / "corpus.jsonl");
      sdst::write_schema(schema, fs::path(gen_out) / "schema.json");
      write_text(fs::path(gen_out) / "stats.txt", sdst::format_stats(sdst::corpus_stats(c)));
      std::cout << sdst::format_stats(sdst::corpus_stats(c));
    } else if (*conv) {
      const sdst::Corpus c =
          sdst::convert_corpus(sdst::parse_source_format(conv_format), conv_in, conv_domain);
      sdst::write_corpus(c, conv_out);
      std::cout << sdst::format_stats(sdst::corpus_stats(c));
    } else if (*tr) {
      const sdst::Corpus c = sdst::load_corpus(tr_corpus);
      sdst::TrainConfig cfg = sdst::load_train_config(tr_config);
      apply_seed_override(&cfg.seed);
      sdst::TrainResult r = sdst::train(c, cfg);
      sdst::save_model(r.model, tr_out);
      write_text(tr_history.empty() ? tr_out + ".history.jsonl" : tr_history,
                 sdst::history_to_jsonl(r.history));
      const auto &best = r.history.epochs.at(r.history.chosen_epoch);
      std::printf("chosen_epoch=%d\ndev_joint_goal_accuracy=%.6f\nthreshold=%.2f\n"
                  "slate_miss_rate=%.6f\n",
                  r.history.chosen_epoch, best.dev_jga, r.model.threshold(),
                  r.history.slate_miss_rate);
    } else if (*grid) {
      const sdst::Corpus c = sdst::load_corpus(grid_corpus);
      sdst::GridSpec spec;
      sdst::TrainConfig base;
      sdst::parse_grid(sdst::KeyValues::load(grid_file), &spec, &base);
      apply_seed_override(&base.seed);
      sdst::GridResult r = sdst::grid_search(c, base, spec);
      fs::create_directories(grid_out);
      write_text(fs::path(grid_out) / "results.tsv", sdst::format_grid_results(r));
      write_text(fs::path(grid_out) / "best.cfg", sdst::format_train_config(r.cells[r.best].config));
      sdst::save_model(*r.best_model, fs::path(grid_out) / "model.json");
      std::cout << sdst::format_grid_results(r);
    } else if (*ev) {
      sdst::TrackerModel model = sdst::load_model(ev_model);
      const sdst::Corpus c = sdst::load_corpus(ev_corpus);
      ensure_domain(&model, c.schema);
      const double threshold = ev_threshold > 0.0 ? ev_threshold : model.threshold();
      const sdst::MetricsReport r = sdst::evaluate(model, c.split(ev_split), threshold);
      sdst::write_report(r, ev_report);
      std::cout << sdst::format_report(r);
    } else if (*tf) {
      std::vector<sdst::Corpus> train_corpora;
      for (const auto &p : split_commas(tf_train)) train_corpora.push_back(sdst::load_corpus(p));
      const sdst::Corpus eval = sdst::load_corpus(tf_eval);
      sdst::TrainConfig cfg = sdst::load_train_config(tf_config);
      apply_seed_override(&cfg.seed);
      const sdst::TransferMode mode = sdst::parse_transfer_mode(tf_mode);
      const sdst::TransferResult r = sdst::transfer_eval(train_corpora, eval, cfg, mode);
      const std::string text = sdst::format_transfer_report(r, mode);
      write_text(tf_report, text);
      std::cout << text;
    } else if (*tk) {
      sdst::TrackerModel model = sdst::load_model(tk_model);
      const sdst::Corpus c = sdst::load_corpus(tk_file);
      ensure_domain(&model, c.schema);
      std::ostringstream out;
      bool found = tk_id.empty();
      for (const char *split : {"train", "dev", "test"}) {
        for (const sdst::Dialogue &d : c.split(split)) {
          if (!tk_id.empty() && d.id != tk_id) continue;
          found = true;
          const auto states = sdst::track_dialogue(d, model);
          for (size_t t = 0; t < states.size(); ++t) {
            for (const auto &[slot, dist] : states[t].distributions) {
              nlohmann::ordered_json j;
              j["dialogue_id"] = d.id;
              j["turn"] = t;
              j["slot"] = slot;
              std::vector<std::string> slate;
              for (int i = 0; i < dist.slate.size(); ++i) slate.push_back(dist.slate.label(i));
              j["slate"] = slate;
              j["probabilities"] = dist.probs;
              j["assignment"] = sdst::to_string(sdst::state_of(states[t].assignments, slot));
              out << j.dump() << "\n";
            }
          }
        }
      }
      if (!found) throw sdst::DataError(tk_file + ": no dialogue with id '" + tk_id + "'");
      if (tk_out.empty()) {
        std::cout << out.str();
      } else {
        write_text(tk_out, out.str());
      }
    } else if (*gc) {
      const bool small = gc_dims == "small";
      const int dim = small ? 8 : 50;
      const int capacity = small ? 3 : 7;
      const sdst::GradientCheckResult r = sdst::tracker_gradient_check(dim, capacity);
      std::printf("dims=%s d=%d K=%d elements_checked=%ld\nmax_relative_error=%.3e\n"
                  "worst_parameter=%s\n",
                  gc_dims.c_str(), dim, capacity, r.elements_checked, r.max_relative_error,
                  r.worst_parameter.c_str());
      if (!(r.max_relative_error < 1e-5)) {
        std::fprintf(stderr, "error: gradient check failed (max relative error %.3e >= 1e-5)\n",
                     r.max_relative_error);
        return kExitNumerical;
      }
    }
  } catch (const sdst::ConfigError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const sdst::NumericalError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const sdst::DataError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return 0;
}
