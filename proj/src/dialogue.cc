#include "sdst/dialogue.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace sdst {

StateValue StateValue::value(std::string text) {
  if (text.empty()) throw std::invalid_argument("state value text is empty");
  return StateValue(StateKind::kValue, std::move(text));
}

std::string to_string(const StateValue &v) {
  switch (v.kind()) {
    case StateKind::kValue:
      return v.text();
    case StateKind::kDontcare:
      return "<dontcare>";
    case StateKind::kUnset:
      break;
  }
  return "<unset>";
}

StateValue state_of(const SlotStates &states, const std::string &slot) {
  auto it = states.find(slot);
  return it == states.end() ? StateValue::unset() : it->second;
}

bool DomainSchema::has_slot(std::string_view slot) const {
  return std::find(slots.begin(), slots.end(), slot) != slots.end();
}

std::string canonicalize_value(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char ch : raw) {
    if (std::isspace(ch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(ch)));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (unsigned char ch : text) {
    if (std::isspace(ch)) {
      flush();
    } else if (ch < 0x80 && std::ispunct(ch)) {
      flush();
      tokens.emplace_back(1, static_cast<char>(ch));
    } else {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  flush();
  return tokens;
}

std::string join_tokens(const std::vector<std::string> &tokens, int start,
                        int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

namespace {

bool contains(const std::vector<std::string> &v, const std::string &x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void check_tokens(const std::vector<std::string> &tokens, const char *side,
                  int turn, std::vector<Violation> *out) {
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string &tok = tokens[i];
    bool bad = tok.empty();
    for (unsigned char ch : tok) {
      if (std::isspace(ch) || std::isupper(ch)) bad = true;
    }
    if (bad) {
      out->push_back({turn, std::string(side) + " token " + std::to_string(i) +
                                " is not canonical: '" + tok + "'"});
    }
  }
}

void check_acts(const std::vector<DialogueAct> &acts,
                const std::vector<std::string> &inventory,
                const DomainSchema &schema, const char *side, int turn,
                std::vector<Violation> *out) {
  for (const DialogueAct &a : acts) {
    std::string where = std::string(side) + " act '" + a.act + "'";
    if (!contains(inventory, a.act)) {
      out->push_back({turn, where + " is not in the act inventory"});
    }
    if (a.value && !a.slot) {
      out->push_back({turn, where + " has a value but no slot"});
    }
    if (a.slot && !schema.has_slot(*a.slot)) {
      out->push_back({turn, where + " names unknown slot '" + *a.slot + "'"});
    }
    if (a.value && canonicalize_value(*a.value) != *a.value) {
      out->push_back({turn, where + " value is not canonical: '" + *a.value +
                                "'"});
    }
    if (a.value && a.value->empty()) {
      out->push_back({turn, where + " has an empty value"});
    }
  }
}

void check_spans(const std::vector<SlotSpan> &spans,
                 const std::vector<std::string> &tokens,
                 const DomainSchema &schema, const char *side, int turn,
                 std::vector<Violation> *out) {
  const int n = static_cast<int>(tokens.size());
  std::vector<std::pair<int, int>> ranges;
  for (const SlotSpan &s : spans) {
    std::string where = std::string(side) + " span (" + s.slot + ", '" +
                        s.value + "', " + std::to_string(s.start) + ", " +
                        std::to_string(s.end) + ")";
    if (!schema.has_slot(s.slot)) {
      out->push_back({turn, where + " names unknown slot"});
    }
    if (s.start < 0 || s.start >= s.end || s.end > n) {
      out->push_back({turn, where + " is out of bounds for " +
                                std::to_string(n) + " tokens"});
      continue;
    }
    if (canonicalize_value(join_tokens(tokens, s.start, s.end)) != s.value) {
      out->push_back({turn, where + " does not match the covered tokens"});
    }
    ranges.emplace_back(s.start, s.end);
  }
  std::sort(ranges.begin(), ranges.end());
  for (size_t i = 1; i < ranges.size(); ++i) {
    if (ranges[i].first < ranges[i - 1].second) {
      out->push_back({turn, std::string(side) + " spans overlap at token " +
                                std::to_string(ranges[i].first)});
    }
  }
}

}  // namespace

std::vector<Violation> validate_dialogue(const Dialogue &d,
                                         const DomainSchema &schema) {
  std::vector<Violation> out;
  if (d.id.empty()) out.push_back({-1, "dialogue id is empty"});
  if (d.domain != schema.domain) {
    out.push_back({-1, "dialogue domain '" + d.domain +
                           "' does not match schema domain '" + schema.domain +
                           "'"});
  }
  if (d.turns.empty()) out.push_back({-1, "dialogue has no turns"});
  for (size_t t = 0; t < d.turns.size(); ++t) {
    const Turn &turn = d.turns[t];
    const int ti = static_cast<int>(t);
    check_tokens(turn.system_tokens, "system", ti, &out);
    check_tokens(turn.user_tokens, "user", ti, &out);
    check_acts(turn.system_acts, schema.system_act_inventory, schema, "system",
               ti, &out);
    check_acts(turn.user_acts, schema.user_act_inventory, schema, "user", ti,
               &out);
    check_spans(turn.system_spans, turn.system_tokens, schema, "system", ti,
                &out);
    check_spans(turn.user_spans, turn.user_tokens, schema, "user", ti, &out);
    for (const auto &[slot, value] : turn.gold_state) {
      if (!schema.has_slot(slot)) {
        out.push_back({ti, "gold state names unknown slot '" + slot + "'"});
      }
      if (value.is_value() &&
          (value.text().empty() || canonicalize_value(value.text()) != value.text())) {
        out.push_back({ti, "gold state value for '" + slot +
                               "' is empty or not canonical"});
      }
    }
  }
  return out;
}

}  // namespace sdst
