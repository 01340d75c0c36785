#include "sdst/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdst/delexicalizer.h"
#include "sdst/errors.h"

namespace sdst {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

const std::vector<Dialogue> &Corpus::split(const std::string &name) const {
  if (name == "train") return train;
  if (name == "dev") return dev;
  if (name == "test") return test;
  throw ConfigError("unknown split '" + name + "' (expected train|dev|test)");
}

namespace {

ordered_json act_to_json(const DialogueAct &a) {
  ordered_json j;
  j["act"] = a.act;
  if (a.slot) j["slot"] = *a.slot;
  if (a.value) j["value"] = *a.value;
  return j;
}

ordered_json span_to_json(const SlotSpan &s) {
  ordered_json j;
  j["slot"] = s.slot;
  j["value"] = s.value;
  j["start"] = s.start;
  j["end"] = s.end;
  return j;
}

ordered_json turn_to_json(const Turn &t) {
  ordered_json j;
  j["system_tokens"] = t.system_tokens;
  j["system_acts"] = ordered_json::array();
  for (const auto &a : t.system_acts) j["system_acts"].push_back(act_to_json(a));
  j["system_spans"] = ordered_json::array();
  for (const auto &s : t.system_spans) j["system_spans"].push_back(span_to_json(s));
  j["user_tokens"] = t.user_tokens;
  j["user_acts"] = ordered_json::array();
  for (const auto &a : t.user_acts) j["user_acts"].push_back(act_to_json(a));
  j["user_spans"] = ordered_json::array();
  for (const auto &s : t.user_spans) j["user_spans"].push_back(span_to_json(s));
  ordered_json state = ordered_json::object();
  for (const auto &[slot, v] : t.gold_state) {
    if (v.kind() == StateKind::kValue) state[slot] = v.text();
    if (v.kind() == StateKind::kDontcare) state[slot] = kDontcareMarker;
  }
  j["state"] = std::move(state);
  return j;
}

DialogueAct act_from_json(const json &j) {
  DialogueAct a;
  a.act = j.at("act").get<std::string>();
  if (j.contains("slot")) a.slot = j.at("slot").get<std::string>();
  if (j.contains("value")) a.value = j.at("value").get<std::string>();
  return a;
}

SlotSpan span_from_json(const json &j) {
  SlotSpan s;
  s.slot = j.at("slot").get<std::string>();
  s.value = j.at("value").get<std::string>();
  s.start = j.at("start").get<int>();
  s.end = j.at("end").get<int>();
  return s;
}

Turn turn_from_json(const json &j) {
  Turn t;
  t.system_tokens = j.at("system_tokens").get<std::vector<std::string>>();
  for (const auto &a : j.at("system_acts")) t.system_acts.push_back(act_from_json(a));
  for (const auto &s : j.at("system_spans")) t.system_spans.push_back(span_from_json(s));
  t.user_tokens = j.at("user_tokens").get<std::vector<std::string>>();
  for (const auto &a : j.at("user_acts")) t.user_acts.push_back(act_from_json(a));
  for (const auto &s : j.at("user_spans")) t.user_spans.push_back(span_from_json(s));
  for (const auto &[slot, v] : j.at("state").items()) {
    std::string text = v.get<std::string>();
    if (text == kDontcareMarker) {
      t.gold_state[slot] = StateValue::dontcare();
    } else if (text.empty()) {
      throw DataError("empty state value for slot '" + slot + "'");
    } else {
      t.gold_state[slot] = StateValue::value(text);
    }
  }
  return t;
}

ordered_json header_to_json(const DomainSchema &s) {
  ordered_json j;
  j["format_version"] = kCorpusFormatVersion;
  j["domain"] = s.domain;
  j["slots"] = s.slots;
  j["user_act_inventory"] = s.user_act_inventory;
  j["system_act_inventory"] = s.system_act_inventory;
  return j;
}

void check_unique(const std::vector<std::string> &names, const char *what,
                  const std::string &origin) {
  std::set<std::string> seen;
  for (const auto &n : names) {
    if (!seen.insert(n).second) {
      throw DataError(origin + ": duplicate " + what + " '" + n + "'");
    }
  }
}

}  // namespace

std::string corpus_to_string(const Corpus &c) {
  std::string out = header_to_json(c.schema).dump();
  out.push_back('\n');
  auto emit = [&](const std::vector<Dialogue> &ds, const char *split) {
    for (const Dialogue &d : ds) {
      ordered_json j;
      j["id"] = d.id;
      j["split"] = split;
      j["turns"] = ordered_json::array();
      for (const Turn &t : d.turns) j["turns"].push_back(turn_to_json(t));
      out += j.dump();
      out.push_back('\n');
    }
  };
  emit(c.train, "train");
  emit(c.dev, "dev");
  emit(c.test, "test");
  return out;
}

void write_corpus(const Corpus &c, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << corpus_to_string(c);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Corpus corpus_from_string(const std::string &text, const std::string &origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  Corpus c;
  bool have_header = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception &e) {
      throw DataError(where + ": parse error: " + e.what());
    }
    try {
      if (!have_header) {
        int version = j.at("format_version").get<int>();
        if (version != kCorpusFormatVersion) {
          throw DataError(where + ": unsupported corpus format_version " +
                          std::to_string(version));
        }
        c.schema.domain = j.at("domain").get<std::string>();
        c.schema.slots = j.at("slots").get<std::vector<std::string>>();
        c.schema.user_act_inventory =
            j.at("user_act_inventory").get<std::vector<std::string>>();
        c.schema.system_act_inventory =
            j.at("system_act_inventory").get<std::vector<std::string>>();
        check_unique(c.schema.slots, "slot", where);
        check_unique(c.schema.user_act_inventory, "user act", where);
        check_unique(c.schema.system_act_inventory, "system act", where);
        have_header = true;
        continue;
      }
      Dialogue d;
      d.id = j.at("id").get<std::string>();
      d.domain = c.schema.domain;
      for (const auto &t : j.at("turns")) d.turns.push_back(turn_from_json(t));
      const std::string split = j.at("split").get<std::string>();
      if (!ids.insert(d.id).second) {
        throw DataError(where + ": duplicate dialogue id '" + d.id + "'");
      }
      auto violations = validate_dialogue(d, c.schema);
      if (!violations.empty()) {
        const Violation &v = violations.front();
        throw DataError(where + ": dialogue '" + d.id + "' turn " +
                        std::to_string(v.turn) + ": " + v.message);
      }
      if (split == "train") {
        c.train.push_back(std::move(d));
      } else if (split == "dev") {
        c.dev.push_back(std::move(d));
      } else if (split == "test") {
        c.test.push_back(std::move(d));
      } else {
        throw DataError(where + ": unknown split '" + split + "'");
      }
    } catch (const json::exception &e) {
      throw DataError(where + ": malformed record: " + e.what());
    }
  }
  if (!have_header) throw DataError(origin + ": missing corpus header line");
  return c;
}

Corpus load_corpus(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return corpus_from_string(buf.str(), path.string());
}

DomainSchema load_schema(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file '" + path.string() + "'");
  DomainSchema s;
  try {
    json j = json::parse(in);
    s.domain = j.at("domain").get<std::string>();
    s.slots = j.at("slots").get<std::vector<std::string>>();
    s.user_act_inventory =
        j.at("user_act_inventory").get<std::vector<std::string>>();
    s.system_act_inventory =
        j.at("system_act_inventory").get<std::vector<std::string>>();
    if (j.contains("value_inventory")) {
      for (const auto &[slot, values] : j.at("value_inventory").items()) {
        for (const auto &v : values) {
          s.value_inventory[slot].push_back(canonicalize_value(v.get<std::string>()));
        }
      }
    }
    if (j.contains("slot_phrases")) {
      s.slot_phrases =
          j.at("slot_phrases").get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception &e) {
    throw DataError(path.string() + ": malformed schema: " + e.what());
  }
  check_unique(s.slots, "slot", path.string());
  check_unique(s.user_act_inventory, "user act", path.string());
  check_unique(s.system_act_inventory, "system act", path.string());
  return s;
}

void write_schema(const DomainSchema &s, const std::filesystem::path &path) {
  ordered_json j;
  j["domain"] = s.domain;
  j["slots"] = s.slots;
  j["user_act_inventory"] = s.user_act_inventory;
  j["system_act_inventory"] = s.system_act_inventory;
  ordered_json phrases = ordered_json::object();
  for (const auto &slot : s.slots) {
    auto it = s.slot_phrases.find(slot);
    if (it != s.slot_phrases.end()) phrases[slot] = it->second;
  }
  j["slot_phrases"] = phrases;
  ordered_json values = ordered_json::object();
  for (const auto &slot : s.slots) {
    auto it = s.value_inventory.find(slot);
    if (it != s.value_inventory.end()) values[slot] = it->second;
  }
  j["value_inventory"] = values;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

double compute_oov_rate(const std::vector<Dialogue> &train,
                        const std::vector<Dialogue> &test) {
  if (test.empty()) throw DataError("OOV rate requires a non-empty test set");
  std::set<std::pair<std::string, std::string>> seen;
  for (const Dialogue &d : train) {
    for (const Turn &t : d.turns) {
      for (const auto &[slot, v] : t.gold_state) {
        if (v.is_value()) seen.emplace(slot, v.text());
      }
      for (const SlotSpan &s : t.user_spans) seen.emplace(s.slot, s.value);
    }
  }
  std::set<std::pair<std::string, std::string>> test_pairs;
  for (const Dialogue &d : test) {
    for (const Turn &t : d.turns) {
      for (const auto &[slot, v] : t.gold_state) {
        if (v.is_value()) test_pairs.emplace(slot, v.text());
      }
    }
  }
  if (test_pairs.empty()) return 0.0;
  int unseen = 0;
  for (const auto &p : test_pairs) unseen += seen.count(p) ? 0 : 1;
  return static_cast<double>(unseen) / static_cast<double>(test_pairs.size());
}

std::string delex_token(const std::string &slot) {
  return "delex(" + slot + ")";
}

Vocabulary::Vocabulary(const std::vector<std::string> &tokens_in_id_order)
    : tokens_(tokens_in_id_order) {
  if (tokens_.size() < 2 || tokens_[0] != kUnkToken ||
      tokens_[1] != kBoundaryToken) {
    throw DataError("vocabulary must start with <unk> and <s>");
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

int Vocabulary::lookup(const std::string &token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? unk_id() : it->second;
}

bool Vocabulary::contains(const std::string &token) const {
  return ids_.count(token) > 0;
}

Vocabulary build_vocab(const std::vector<const std::vector<Dialogue> *> &train,
                       const std::vector<std::string> &slots, int min_count) {
  std::vector<std::string> reserved = {kUnkToken, kBoundaryToken};
  std::set<std::string> delex;
  for (const auto &s : slots) delex.insert(delex_token(s));
  reserved.insert(reserved.end(), delex.begin(), delex.end());
  std::set<std::string> reserved_set(reserved.begin(), reserved.end());

  std::map<std::string, int> counts;
  for (const auto *split : train) {
    for (const Dialogue &d : *split) {
      for (const Turn &t : d.turns) {
        for (const auto &tok : delexicalize(t.system_tokens, t.system_spans).tokens) {
          ++counts[tok];
        }
        for (const auto &tok : delexicalize(t.user_tokens, t.user_spans).tokens) {
          ++counts[tok];
        }
      }
    }
  }
  std::vector<std::pair<std::string, int>> ranked;
  for (const auto &[tok, n] : counts) {
    if (n >= min_count && !reserved_set.count(tok)) ranked.emplace_back(tok, n);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> tokens = reserved;
  for (const auto &[tok, n] : ranked) tokens.push_back(tok);
  return Vocabulary(tokens);
}

Vocabulary build_vocab(const std::vector<Dialogue> &train,
                       const std::vector<std::string> &slots, int min_count) {
  return build_vocab(std::vector<const std::vector<Dialogue> *>{&train}, slots,
                     min_count);
}

CorpusStats corpus_stats(const Corpus &c) {
  CorpusStats s;
  s.train_dialogues = static_cast<int>(c.train.size());
  s.dev_dialogues = static_cast<int>(c.dev.size());
  s.test_dialogues = static_cast<int>(c.test.size());
  long turns = 0;
  int dialogues = 0;
  std::map<std::string, std::set<std::string>> values;
  for (const auto *split : {&c.train, &c.dev, &c.test}) {
    for (const Dialogue &d : *split) {
      ++dialogues;
      turns += static_cast<long>(d.turns.size());
      s.max_turns = std::max(s.max_turns, static_cast<int>(d.turns.size()));
      for (const Turn &t : d.turns) {
        for (const auto &[slot, v] : t.gold_state) {
          if (v.is_value()) values[slot].insert(v.text());
        }
      }
    }
  }
  s.mean_turns = dialogues ? static_cast<double>(turns) / dialogues : 0.0;
  s.oov_rate = c.test.empty() ? 0.0 : compute_oov_rate(c.train, c.test);
  for (const auto &slot : c.schema.slots) {
    s.values_per_slot[slot] = static_cast<int>(values[slot].size());
  }
  return s;
}

std::string format_stats(const CorpusStats &s) {
  std::ostringstream out;
  out << "train_dialogues=" << s.train_dialogues << '\n'
      << "dev_dialogues=" << s.dev_dialogues << '\n'
      << "test_dialogues=" << s.test_dialogues << '\n'
      << "mean_turns=" << s.mean_turns << '\n'
      << "max_turns=" << s.max_turns << '\n'
      << "oov_rate=" << s.oov_rate << '\n';
  for (const auto &[slot, n] : s.values_per_slot) {
    out << "values." << slot << '=' << n << '\n';
  }
  return out.str();
}

}  // namespace sdst
