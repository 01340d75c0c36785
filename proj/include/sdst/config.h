#ifndef SDST_CONFIG_H_
#define SDST_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdst/tracker_model.h"

namespace sdst {

// Plain key=value text. Blank lines and lines starting with '#' are skipped;
// keys and values are trimmed. Malformed lines and duplicate keys throw
// ConfigError naming origin:line.
class KeyValues {
 public:
  static KeyValues parse(const std::string &text, const std::string &origin);
  // Missing or unreadable files throw DataError.
  static KeyValues load(const std::filesystem::path &path);

  const std::string &origin() const { return origin_; }
  bool has(const std::string &key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string> &values() const { return values_; }

  std::string get_string(const std::string &key, const std::string &fallback) const;
  int get_int(const std::string &key, int fallback) const;
  double get_double(const std::string &key, double fallback) const;
  uint64_t get_uint64(const std::string &key, uint64_t fallback) const;
  std::vector<int> get_int_list(const std::string &key, std::vector<int> fallback) const;
  std::vector<double> get_double_list(const std::string &key,
                                      std::vector<double> fallback) const;

  // Throws ConfigError listing keys not in `known`.
  void require_known(const std::vector<std::string> &known) const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

inline constexpr const char *kSeedEnvVar = "SDST_SEED";

// Value of SDST_SEED when set; throws ConfigError when it is not an integer.
std::optional<uint64_t> seed_override_from_env();

enum class SlateMissPolicy { kSkip, kMapToNull };

std::string to_string(SlateMissPolicy p);
SlateMissPolicy parse_slate_miss_policy(const std::string &text);

struct TrainConfig {
  int embedding_dim = 50;
  int gru_hidden_dim = 50;
  int scorer_hidden_dim = 50;
  double learning_rate = 0.001;
  int batch_size = 1;  // dialogues per update
  int max_epochs = 50;
  int patience = 5;
  uint64_t seed = 1;
  SharingMode sharing = SharingMode::kShared;
  SlateMissPolicy slate_miss_policy = SlateMissPolicy::kSkip;
  int capacity = kDefaultCapacity;
  int min_count = 1;

  ModelConfig model_config() const;
  // Throws ConfigError naming the offending field.
  void validate() const;
};

TrainConfig train_config_from(const KeyValues &kv);
TrainConfig load_train_config(const std::filesystem::path &path);
std::string format_train_config(const TrainConfig &cfg);

}  // namespace sdst

#endif  // SDST_CONFIG_H_
