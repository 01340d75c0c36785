#include "sdst/converters.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>


#include "json.hpp"
#include "sdst/errors.h"

namespace sdst {
namespace {

using nlohmann::json;

const char *const kSplits[] = {"train", "dev", "test"};

json read_json(const std::filesystem::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> lower_tokens(const std::vector<std::string> &raw) {
  std::vector<std::string> out;
  for (const auto &t : raw) {
    std::string w = lower(t);
    w.erase(std::remove(w.begin(), w.end(), ' '), w.end());
    out.push_back(w.empty() ? "_" : w);
  }
  return out;
}

std::string span_text(const std::vector<std::string> &tokens, int start, int end) {
  return join_tokens(tokens, start, end);
}

// Collects inventories while dialogues are read, then assembles the schema.
struct SchemaBuilder {
  std::set<std::string> slots;
  std::set<std::string> user_acts;
  std::set<std::string> system_acts;

  DomainSchema build(const std::string &domain) const {
    DomainSchema s;
    s.domain = domain;
    s.slots.assign(slots.begin(), slots.end());
    s.user_act_inventory.assign(user_acts.begin(), user_acts.end());
    s.system_act_inventory.assign(system_acts.begin(), system_acts.end());
    return s;
  }
};

// Normalizes one act. A "dontcare" value becomes the dontcare act on the slot;
// acts on slots outside the tracked set are dropped.
void add_act(std::string act, std::optional<std::string> slot, std::optional<std::string> value,
             const std::set<std::string> &tracked, std::vector<DialogueAct> *out) {
  act = lower(act);
  if (slot) slot = lower(*slot);
  if (value) value = canonicalize_value(*value);
  if (value && value->empty()) value.reset();
  if (slot && !tracked.count(*slot)) return;
  if (!slot) value.reset();
  if (value && *value == "dontcare") {
    act = "dontcare";
    value.reset();
  }
  out->push_back({act, slot, value});
}

void record_acts(const std::vector<DialogueAct> &acts, std::set<std::string> *inventory) {
  for (const auto &a : acts) inventory->insert(a.act);
}

StateValue state_value(const std::string &raw) {
  const std::string v = canonicalize_value(raw);
  return v == "dontcare" ? StateValue::dontcare() : StateValue::value(v);
}

void check(const Corpus &c) {
  for (const char *split : kSplits) {
    for (const Dialogue &d : c.split(split)) {
      const auto v = validate_dialogue(d, c.schema);
      if (!v.empty()) {
        throw DataError("converted dialogue " + d.id + " turn " + std::to_string(v.front().turn) +
                        ": " + v.front().message);
      }
    }
  }
}

// ---- simulated dialogue ----

std::vector<SlotSpan> sim_spans(const json &utt, const std::vector<std::string> &tokens) {
  std::vector<SlotSpan> out;
  for (const auto &s : utt.value("slots", json::array())) {
    const int start = s.at("start").get<int>();
    const int end = s.at("exclusive_end").get<int>();
    if (start < 0 || end > static_cast<int>(tokens.size()) || start >= end) {
      throw DataError("span [" + std::to_string(start) + ", " + std::to_string(end) +
                      ") outside utterance");
    }
    out.push_back({lower(s.at("slot").get<std::string>()), span_text(tokens, start, end), start, end});
  }
  return out;
}

std::vector<Dialogue> read_sim_split(const json &data, const std::filesystem::path &path,
                                     const std::string &domain, SchemaBuilder *schema) {
  // First pass: slots named by states and spans are the tracked slots.
  for (const auto &d : data) {
    for (const auto &t : d.at("turns")) {
      for (const auto &s : t.value("dialogue_state", json::array())) {
        schema->slots.insert(lower(s.at("slot").get<std::string>()));
      }
      for (const char *side : {"system_utterance", "user_utterance"}) {
        if (!t.contains(side)) continue;
        for (const auto &s : t.at(side).value("slots", json::array())) {
          schema->slots.insert(lower(s.at("slot").get<std::string>()));
        }
      }
    }
  }
  std::vector<Dialogue> out;
  for (const auto &jd : data) {
    Dialogue d;
    d.id = jd.at("dialogue_id").get<std::string>();
    d.domain = domain;
    try {
      for (const auto &jt : jd.at("turns")) {
        Turn t;
        if (jt.contains("system_utterance")) {
          const auto &u = jt.at("system_utterance");
          t.system_tokens = lower_tokens(u.value("tokens", std::vector<std::string>{}));
          t.system_spans = sim_spans(u, t.system_tokens);
        }
        const auto &u = jt.at("user_utterance");
        t.user_tokens = lower_tokens(u.value("tokens", std::vector<std::string>{}));
        t.user_spans = sim_spans(u, t.user_tokens);
        auto acts = [&](const char *key, std::vector<DialogueAct> *dst) {
          for (const auto &a : jt.value(key, json::array())) {
            std::optional<std::string> slot, value;
            if (a.contains("slot")) slot = a.at("slot").get<std::string>();
            if (a.contains("value")) value = a.at("value").get<std::string>();
            add_act(a.at("type").get<std::string>(), slot, value, schema->slots, dst);
          }
        };
        acts("system_acts", &t.system_acts);
        acts("user_acts", &t.user_acts);
        record_acts(t.system_acts, &schema->system_acts);
        record_acts(t.user_acts, &schema->user_acts);
        for (const auto &s : jt.value("dialogue_state", json::array())) {
          t.gold_state[lower(s.at("slot").get<std::string>())] =
              state_value(s.at("value").get<std::string>());
        }
        d.turns.push_back(std::move(t));
      }
    } catch (const json::exception &e) {
      throw DataError(path.string() + ": dialogue " + d.id + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError(path.string() + ": dialogue " + d.id + ": " + e.what());
    }
    out.push_back(std::move(d));
  }
  return out;
}

// ---- DSTC2 ----

std::vector<DialogueAct> dstc2_acts(const json &acts, const std::set<std::string> &tracked) {
  std::vector<DialogueAct> out;
  for (const auto &a : acts) {
    const std::string name = a.at("act").get<std::string>();
    const auto &slots = a.value("slots", json::array());
    if (slots.empty()) {
      add_act(name, std::nullopt, std::nullopt, tracked, &out);
      continue;
    }
    for (const auto &sv : slots) {
      const std::string first = sv.at(0).get<std::string>();
      const std::string second = sv.size() > 1 && sv.at(1).is_string() ? sv.at(1).get<std::string>() : "";
      if (first == "slot") {
        add_act(name, second, std::nullopt, tracked, &out);
      } else {
        add_act(name, first, second.empty() ? std::nullopt : std::optional<std::string>(second),
                tracked, &out);
      }
    }
  }
  return out;
}

// Non-overlapping token matches of each act value, in act order.
std::vector<SlotSpan> match_spans(const std::vector<std::string> &tokens,
                                  const std::vector<DialogueAct> &acts) {
  std::vector<SlotSpan> out;
  std::vector<bool> used(tokens.size(), false);
  for (const auto &a : acts) {
    if (!a.slot || !a.value) continue;
    const std::vector<std::string> needle = tokenize(*a.value);
    if (needle.empty() || needle.size() > tokens.size()) continue;
    for (size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
      bool hit = true;
      for (size_t k = 0; k < needle.size() && hit; ++k) {
        hit = !used[i + k] && tokens[i + k] == needle[k];
      }
      if (!hit) continue;
      const int start = static_cast<int>(i);
      const int end = static_cast<int>(i + needle.size());
      if (span_text(tokens, start, end) != *a.value) continue;
      for (int k = start; k < end; ++k) used[k] = true;
      out.push_back({*a.slot, *a.value, start, end});
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const SlotSpan &x, const SlotSpan &y) { return x.start < y.start; });
  return out;
}

std::vector<std::filesystem::path> session_dirs(const std::filesystem::path &root) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(root)) return out;
  for (const auto &e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() == "label.json") {
      out.push_back(e.path().parent_path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SourceFormat parse_source_format(const std::string &text) {
  if (text == "dstc2") return SourceFormat::kDstc2;
  if (text == "simdialogue") return SourceFormat::kSimDialogue;
  throw ConfigError("unknown source format '" + text + "' (dstc2 or simdialogue)");
}

Corpus convert_simdialogue(const std::filesystem::path &dir, const std::string &domain) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  SchemaBuilder schema;
  std::vector<Dialogue> splits[3];
  bool any = false;
  for (int i = 0; i < 3; ++i) {
    const auto path = dir / (std::string(kSplits[i]) + ".json");
    if (!std::filesystem::exists(path)) continue;
    any = true;
    const json data = read_json(path);
    if (!data.is_array()) throw DataError(path.string() + ": expected a JSON array of dialogues");
    splits[i] = read_sim_split(data, path, domain, &schema);
  }
  if (!any) throw DataError(dir.string() + ": no train.json, dev.json or test.json");
  Corpus c;
  c.schema = schema.build(domain);
  c.train = std::move(splits[0]);
  c.dev = std::move(splits[1]);
  c.test = std::move(splits[2]);
  check(c);
  return c;
}

Corpus convert_dstc2(const std::filesystem::path &dir, const std::string &domain) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  SchemaBuilder schema;
  std::vector<std::filesystem::path> sessions[3];
  for (int i = 0; i < 3; ++i) sessions[i] = session_dirs(dir / kSplits[i]);
  // Tracked slots are those named by goal labels anywhere in the data.
  for (const auto &list : sessions) {
    for (const auto &s : list) {
      const json label = read_json(s / "label.json");
      for (const auto &t : label.value("turns", json::array())) {
        const json goals = t.value("goal-labels", json::object());
        for (const auto &[slot, v] : goals.items()) {
          schema.slots.insert(lower(slot));
        }
      }
    }
  }
  Corpus c;
  std::vector<Dialogue> *targets[3] = {&c.train, &c.dev, &c.test};
  for (int i = 0; i < 3; ++i) {
    for (const auto &s : sessions[i]) {
      const json log = read_json(s / "log.json");
      const json label = read_json(s / "label.json");
      Dialogue d;
      d.id = label.value("session-id", s.filename().string());
      d.domain = domain;
      try {
        const auto &log_turns = log.at("turns");
        const auto &label_turns = label.at("turns");
        if (log_turns.size() != label_turns.size()) {
          throw DataError("log has " + std::to_string(log_turns.size()) + " turns, labels have " +
                          std::to_string(label_turns.size()));
        }
        for (size_t k = 0; k < log_turns.size(); ++k) {
          const auto &out = log_turns[k].at("output");
          const auto &lab = label_turns[k];
          Turn t;
          t.system_tokens = tokenize(out.value("transcript", ""));
          t.system_acts = dstc2_acts(out.value("dialog-acts", json::array()), schema.slots);
          t.system_spans = match_spans(t.system_tokens, t.system_acts);
          t.user_tokens = tokenize(lab.value("transcription", ""));
          t.user_acts = dstc2_acts(lab.at("semantics").value("json", json::array()), schema.slots);
          t.user_spans = match_spans(t.user_tokens, t.user_acts);
          record_acts(t.system_acts, &schema.system_acts);
          record_acts(t.user_acts, &schema.user_acts);
          const json goals = lab.value("goal-labels", json::object());
          for (const auto &[slot, v] : goals.items()) {
            t.gold_state[lower(slot)] = state_value(v.get<std::string>());
          }
          d.turns.push_back(std::move(t));
        }
      } catch (const json::exception &e) {
        throw DataError(s.string() + ": " + e.what());
      } catch (const DataError &e) {
        throw DataError(s.string() + ": " + e.what());
      }
      targets[i]->push_back(std::move(d));
    }
  }
  if (c.train.empty() && c.dev.empty() && c.test.empty()) {
    throw DataError(dir.string() + ": no sessions with label.json under train/, dev/ or test/");
  }
  c.schema = schema.build(domain);
  check(c);
  return c;
}

Corpus convert_corpus(SourceFormat format, const std::filesystem::path &dir,
                      const std::string &domain) {
  std::string name = domain;
  if (name.empty()) {
    auto p = dir;
    if (!p.has_filename()) p = p.parent_path();
    name = lower(p.filename().string());
  }
  return format == SourceFormat::kDstc2 ? convert_dstc2(dir, name) : convert_simdialogue(dir, name);
}

}  // namespace sdst
