#ifndef SDST_SYNTHETIC_H_
#define SDST_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdst/config.h"
#include "sdst/corpus.h"
#include "sdst/dialogue.h"

namespace sdst {

// Parameters of the agenda-based simulated user and rule system policy.
struct GenConfig {
  int n_train = 500;
  int n_dev = 100;
  int n_test = 200;
  // Target fraction of distinct test (slot, value) gold pairs unseen in train.
  double target_oov = 0.4;
  double oov_tolerance = 0.05;
  int max_turns = 10;
  double dontcare_prob = 0.1;       // goal slot is dontcare
  double negate_prob = 0.15;        // user changes a filled slot in a free turn
  double confirm_prob = 0.3;        // system confirms a value just informed
  double confirm_error_prob = 0.3;  // the confirmed value is wrong
  double offer_prob = 0.25;         // system proposes a value for the next slot
  uint64_t seed = 1;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

// Keys match the field names; unknown keys are rejected.
GenConfig gen_config_from(const KeyValues &kv);

// Built-in schemas with act and value inventories: "restaurant" and "movie".
std::vector<std::string> builtin_schema_names();
DomainSchema builtin_schema(const std::string &name);
// "builtin:NAME" or a schema JSON path.
DomainSchema resolve_schema(const std::string &spec);

struct ValuePools {
  std::map<std::string, std::vector<std::string>> train;
  std::map<std::string, std::vector<std::string>> eval;  // dev and test
};

struct GenReport {
  double test_oov = 0.0;
  int attempts = 0;
};

// One simulated dialogue drawing goal values from `pools`. Deterministic in
// `seed`.
Dialogue generate_dialogue(const DomainSchema &schema,
                           const std::map<std::string, std::vector<std::string>> &pools,
                           const GenConfig &cfg, uint64_t seed, const std::string &id);

// Train, dev and test splits. Each slot's values are partitioned into
// train-visible values and held-out values; dev and test draw from the held-out
// values mixed with values seen in train, in the proportion that puts the test
// OOV rate at cfg.target_oov. The mix is re-drawn until the measured rate is
// within cfg.oov_tolerance; throws ConfigError when the target is unreachable.
Corpus generate_corpus(const DomainSchema &schema, const GenConfig &cfg,
                       GenReport *report = nullptr);

}  // namespace sdst

#endif  // SDST_SYNTHETIC_H_
