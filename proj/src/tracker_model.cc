#include "sdst/tracker_model.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdst/errors.h"

namespace sdst {

namespace {

constexpr const char *kSharedScorer = "shared";
constexpr const char *kModelKind = "sdst-tracker";

}  // namespace

std::string to_string(SharingMode mode) {
  return mode == SharingMode::kShared ? "shared" : "per_slot";
}

SharingMode parse_sharing_mode(const std::string &text) {
  if (text == "shared") return SharingMode::kShared;
  if (text == "per_slot") return SharingMode::kPerSlot;
  throw ConfigError("unknown sharing mode '" + text + "' (expected shared|per_slot)");
}

TrackerModel::TrackerModel(ModelConfig config, Vocabulary vocab, ActInventory acts,
                           std::map<std::string, std::vector<std::string>> domain_slots)
    : config_(config),
      vocab_(std::move(vocab)),
      acts_(std::move(acts)),
      layout_(config.gru_hidden_dim, acts_.user_size(), acts_.system_size()),
      domains_(std::move(domain_slots)),
      store_(config.seed) {
  if (config.embedding_dim < 1 || config.gru_hidden_dim < 1 ||
      config.scorer_hidden_dim < 1 || config.capacity < 1) {
    throw ConfigError("model dimensions and capacity must be positive");
  }
  for (const auto &[domain, slots] : domains_) {
    for (const auto &slot : slots) {
      if (!vocab_.contains(delex_token(slot))) {
        throw ConfigError("vocabulary lacks " + delex_token(slot));
      }
    }
  }
  encoder_ = add_encoder(&store_, "encoder", vocab_.size(), config.embedding_dim,
                         config.gru_hidden_dim);
  auto make = [&](const std::string &name) {
    scorers_.emplace(name, add_scorer(&store_, "scorer." + name, layout_.shared_dim(),
                                      layout_.candidate_dim(),
                                      config_.scorer_hidden_dim));
  };
  if (config.sharing == SharingMode::kShared) {
    make(kSharedScorer);
  } else {
    std::set<std::string> all;
    for (const auto &[domain, slots] : domains_) all.insert(slots.begin(), slots.end());
    for (const auto &slot : all) make(slot);
  }
}

const std::vector<std::string> &TrackerModel::slots_for(const std::string &domain) const {
  auto it = domains_.find(domain);
  if (it == domains_.end()) {
    throw ConfigError("model does not know domain '" + domain + "'");
  }
  return it->second;
}

const ScorerParams &TrackerModel::scorer_for(const std::string &slot) const {
  if (config_.sharing == SharingMode::kShared) return scorers_.begin()->second;
  auto it = scorers_.find(slot);
  if (it == scorers_.end()) throw ConfigError("no scorer for slot '" + slot + "'");
  return it->second;
}

std::vector<std::string> TrackerModel::scorer_names() const {
  std::vector<std::string> out;
  for (const auto &[name, p] : scorers_) out.push_back(name);
  return out;
}

void TrackerModel::add_domain(const std::string &domain,
                              const std::vector<std::string> &slots) {
  for (const auto &slot : slots) {
    if (config_.sharing == SharingMode::kPerSlot && !scorers_.count(slot)) {
      throw ConfigError("per-slot model has no scorer for slot '" + slot +
                        "'; transfer to new slots requires shared mode");
    }
    if (!vocab_.contains(delex_token(slot))) {
      throw ConfigError("vocabulary lacks " + delex_token(slot) +
                        " needed by domain '" + domain + "'");
    }
  }
  domains_[domain] = slots;
}

std::string model_to_string(const TrackerModel &m) {
  nlohmann::ordered_json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = kModelKind;
  j["sharing_mode"] = to_string(m.config().sharing);
  j["capacity"] = m.config().capacity;
  j["threshold"] = m.threshold();
  nlohmann::ordered_json hp;
  hp["embedding_dim"] = m.config().embedding_dim;
  hp["gru_hidden_dim"] = m.config().gru_hidden_dim;
  hp["scorer_hidden_dim"] = m.config().scorer_hidden_dim;
  hp["seed"] = m.config().seed;
  j["hyperparameters"] = hp;
  j["user_acts"] = m.acts().user();
  j["system_acts"] = m.acts().system();
  nlohmann::ordered_json domains = nlohmann::ordered_json::object();
  for (const auto &[d, slots] : m.domains()) domains[d] = slots;
  j["domains"] = domains;
  j["vocabulary"] = m.vocab().tokens();
  j["scorers"] = m.scorer_names();
  j["parameters"] = params_to_json(m.store(), Precision::kFloat64);
  return j.dump() + "\n";
}

TrackerModel model_from_string(const std::string &text, const std::string &origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw DataError(origin + ": corrupt model file: " + e.what());
  }
  try {
    if (!j.contains("format_version")) {
      throw DataError(origin + ": corrupt model file: missing format_version");
    }
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError(origin + ": unsupported model format_version " +
                      std::to_string(version) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    }
    if (j.at("kind").get<std::string>() != kModelKind) {
      throw DataError(origin + ": not a tracker model file");
    }
    ModelConfig cfg;
    cfg.sharing = parse_sharing_mode(j.at("sharing_mode").get<std::string>());
    cfg.capacity = j.at("capacity").get<int>();
    const auto &hp = j.at("hyperparameters");
    cfg.embedding_dim = hp.at("embedding_dim").get<int>();
    cfg.gru_hidden_dim = hp.at("gru_hidden_dim").get<int>();
    cfg.scorer_hidden_dim = hp.at("scorer_hidden_dim").get<int>();
    cfg.seed = hp.at("seed").get<uint64_t>();
    ActInventory acts(j.at("user_acts").get<std::vector<std::string>>(),
                      j.at("system_acts").get<std::vector<std::string>>());
    auto domains =
        j.at("domains").get<std::map<std::string, std::vector<std::string>>>();
    Vocabulary vocab(j.at("vocabulary").get<std::vector<std::string>>());
    TrackerModel model(cfg, std::move(vocab), std::move(acts), std::move(domains));
    if (j.at("scorers").get<std::vector<std::string>>() != model.scorer_names()) {
      throw DataError(origin + ": scorer list does not match the sharing mode");
    }
    model.set_threshold(j.at("threshold").get<double>());
    params_from_json(j.at("parameters"), &model.store());
    return model;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(origin + ": corrupt model file: " + e.what());
  } catch (const ConfigError &e) {
    throw DataError(origin + ": inconsistent model file: " + e.what());
  }
}

void save_model(const TrackerModel &model, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << model_to_string(model);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

TrackerModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_string(buf.str(), path.string());
}

}  // namespace sdst
