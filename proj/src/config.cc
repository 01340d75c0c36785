#include "sdst/config.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdst/errors.h"

namespace sdst {
namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string &text, const std::string &what) {
  T v{};
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError(what + ": cannot parse '" + text + "'");
  }
  return v;
}

double parse_double(const std::string &text, const std::string &what) {
  char *end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError(what + ": cannot parse '" + text + "'");
  }
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

KeyValues KeyValues::parse(const std::string &text, const std::string &origin) {
  KeyValues kv;
  kv.origin_ = origin;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (kv.values_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    kv.values_[key] = trim(t.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

std::string KeyValues::get_string(const std::string &key,
                                  const std::string &fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int KeyValues::get_int(const std::string &key, int fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<int>(it->second, origin_ + ": " + key);
}

double KeyValues::get_double(const std::string &key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(it->second, origin_ + ": " + key);
}

uint64_t KeyValues::get_uint64(const std::string &key, uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback
                             : parse_number<uint64_t>(it->second, origin_ + ": " + key);
}

std::vector<int> KeyValues::get_int_list(const std::string &key,
                                         std::vector<int> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (const auto &item : split_list(it->second)) {
    out.push_back(parse_number<int>(item, origin_ + ": " + key));
  }
  return out;
}

std::vector<double> KeyValues::get_double_list(const std::string &key,
                                               std::vector<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto &item : split_list(it->second)) {
    out.push_back(parse_double(item, origin_ + ": " + key));
  }
  return out;
}

void KeyValues::require_known(const std::vector<std::string> &known) const {
  std::string unknown;
  for (const auto &[key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      unknown += (unknown.empty() ? "" : ", ") + key;
    }
  }
  if (!unknown.empty()) throw ConfigError(origin_ + ": unknown keys: " + unknown);
}

std::optional<uint64_t> seed_override_from_env() {
  const char *v = std::getenv(kSeedEnvVar);
  if (!v || !*v) return std::nullopt;
  return parse_number<uint64_t>(v, kSeedEnvVar);
}

std::string to_string(SlateMissPolicy p) {
  return p == SlateMissPolicy::kSkip ? "skip" : "map_to_null";
}

SlateMissPolicy parse_slate_miss_policy(const std::string &text) {
  if (text == "skip") return SlateMissPolicy::kSkip;
  if (text == "map_to_null") return SlateMissPolicy::kMapToNull;
  throw ConfigError("unknown slate_miss_policy '" + text + "' (skip or map_to_null)");
}

ModelConfig TrainConfig::model_config() const {
  ModelConfig m;
  m.embedding_dim = embedding_dim;
  m.gru_hidden_dim = gru_hidden_dim;
  m.scorer_hidden_dim = scorer_hidden_dim;
  m.capacity = capacity;
  m.sharing = sharing;
  m.seed = seed;
  return m;
}

void TrainConfig::validate() const {
  auto positive = [](int v, const char *name) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive, got " + std::to_string(v));
  };
  positive(embedding_dim, "embedding_dim");
  positive(gru_hidden_dim, "gru_hidden_dim");
  positive(scorer_hidden_dim, "scorer_hidden_dim");
  positive(batch_size, "batch_size");
  positive(max_epochs, "max_epochs");
  positive(patience, "patience");
  positive(capacity, "capacity");
  positive(min_count, "min_count");
  if (!(learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive, got " + fmt(learning_rate));
  }
}

TrainConfig train_config_from(const KeyValues &kv) {
  kv.require_known({"embedding_dim", "gru_hidden_dim", "scorer_hidden_dim", "learning_rate",
                    "batch_size", "max_epochs", "patience", "seed", "sharing_mode",
                    "slate_miss_policy", "capacity", "min_count"});
  TrainConfig c;
  c.embedding_dim = kv.get_int("embedding_dim", c.embedding_dim);
  c.gru_hidden_dim = kv.get_int("gru_hidden_dim", c.gru_hidden_dim);
  c.scorer_hidden_dim = kv.get_int("scorer_hidden_dim", c.scorer_hidden_dim);
  c.learning_rate = kv.get_double("learning_rate", c.learning_rate);
  c.batch_size = kv.get_int("batch_size", c.batch_size);
  c.max_epochs = kv.get_int("max_epochs", c.max_epochs);
  c.patience = kv.get_int("patience", c.patience);
  c.seed = kv.get_uint64("seed", c.seed);
  c.sharing = parse_sharing_mode(kv.get_string("sharing_mode", to_string(c.sharing)));
  c.slate_miss_policy =
      parse_slate_miss_policy(kv.get_string("slate_miss_policy", to_string(c.slate_miss_policy)));
  c.capacity = kv.get_int("capacity", c.capacity);
  c.min_count = kv.get_int("min_count", c.min_count);
  try {
    c.validate();
  } catch (const ConfigError &e) {
    throw ConfigError(kv.origin() + ": " + e.what());
  }
  return c;
}

TrainConfig load_train_config(const std::filesystem::path &path) {
  return train_config_from(KeyValues::load(path));
}

std::string format_train_config(const TrainConfig &c) {
  std::ostringstream out;
  out << "embedding_dim=" << c.embedding_dim << "\n"
      << "gru_hidden_dim=" << c.gru_hidden_dim << "\n"
      << "scorer_hidden_dim=" << c.scorer_hidden_dim << "\n"
      << "learning_rate=" << fmt(c.learning_rate) << "\n"
      << "batch_size=" << c.batch_size << "\n"
      << "max_epochs=" << c.max_epochs << "\n"
      << "patience=" << c.patience << "\n"
      << "seed=" << c.seed << "\n"
      << "sharing_mode=" << to_string(c.sharing) << "\n"
      << "slate_miss_policy=" << to_string(c.slate_miss_policy) << "\n"
      << "capacity=" << c.capacity << "\n"
      << "min_count=" << c.min_count << "\n";
  return out.str();
}

}  // namespace sdst
