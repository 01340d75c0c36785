#ifndef SDST_TRACKER_MODEL_H_
#define SDST_TRACKER_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sdst/candidate_set.h"
#include "sdst/corpus.h"
#include "sdst/encoder.h"
#include "sdst/features.h"
#include "sdst/scorer.h"
#include "sdst/tensor.h"

namespace sdst {

enum class SharingMode { kPerSlot, kShared };

std::string to_string(SharingMode mode);
SharingMode parse_sharing_mode(const std::string &text);

struct ModelConfig {
  int embedding_dim = 50;
  int gru_hidden_dim = 50;
  int scorer_hidden_dim = 50;
  int capacity = kDefaultCapacity;
  SharingMode sharing = SharingMode::kShared;
  uint64_t seed = 1;
};

inline constexpr int kModelFormatVersion = 1;
inline constexpr double kDefaultThreshold = 0.5;

// All trainable parameters plus everything needed to featurize a dialogue.
// Scorer parameters exist once (shared mode) or once per slot (per-slot mode).
class TrackerModel {
 public:
  TrackerModel(ModelConfig config, Vocabulary vocab, ActInventory acts,
               std::map<std::string, std::vector<std::string>> domain_slots);

  const ModelConfig &config() const { return config_; }
  const Vocabulary &vocab() const { return vocab_; }
  const ActInventory &acts() const { return acts_; }
  const FeatureLayout &layout() const { return layout_; }
  const EncoderParams &encoder() const { return encoder_; }
  const std::map<std::string, std::vector<std::string>> &domains() const {
    return domains_;
  }
  // Throws ConfigError for an unknown domain.
  const std::vector<std::string> &slots_for(const std::string &domain) const;
  const ScorerParams &scorer_for(const std::string &slot) const;
  int num_scorers() const { return static_cast<int>(scorers_.size()); }
  // Names the scorer sets are keyed by ("shared" in shared mode).
  std::vector<std::string> scorer_names() const;

  // Registers a new domain so its slots can be tracked. In per-slot mode every
  // slot must already have a scorer.
  void add_domain(const std::string &domain, const std::vector<std::string> &slots);

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }

  ParameterStore &store() { return store_; }
  const ParameterStore &store() const { return store_; }

 private:
  ModelConfig config_;
  Vocabulary vocab_;
  ActInventory acts_;
  FeatureLayout layout_;
  std::map<std::string, std::vector<std::string>> domains_;
  ParameterStore store_;
  EncoderParams encoder_;
  std::map<std::string, ScorerParams> scorers_;
  double threshold_ = kDefaultThreshold;
};

std::string model_to_string(const TrackerModel &model);
TrackerModel model_from_string(const std::string &text, const std::string &origin);
void save_model(const TrackerModel &model, const std::filesystem::path &path);
TrackerModel load_model(const std::filesystem::path &path);

}  // namespace sdst

#endif  // SDST_TRACKER_MODEL_H_
