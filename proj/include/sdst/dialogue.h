#ifndef SDST_DIALOGUE_H_
#define SDST_DIALOGUE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdst {

// A structured intent annotation, e.g. inform(time="6 pm") or negate.
struct DialogueAct {
  std::string act;
  std::optional<std::string> slot;
  std::optional<std::string> value;

  bool operator==(const DialogueAct &) const = default;
};

// Token range [start, end) of an utterance tagged with a slot value.
struct SlotSpan {
  std::string slot;
  std::string value;
  int start = 0;
  int end = 0;

  bool operator==(const SlotSpan &) const = default;
};

enum class StateKind { kValue, kDontcare, kUnset };

class StateValue {
 public:
  StateValue() = default;

  static StateValue value(std::string text);
  static StateValue dontcare() { return StateValue(StateKind::kDontcare, ""); }
  static StateValue unset() { return StateValue(); }

  StateKind kind() const { return kind_; }
  const std::string &text() const { return text_; }
  bool is_value() const { return kind_ == StateKind::kValue; }
  bool is_set() const { return kind_ != StateKind::kUnset; }

  bool operator==(const StateValue &) const = default;

 private:
  StateValue(StateKind kind, std::string text)
      : kind_(kind), text_(std::move(text)) {}

  StateKind kind_ = StateKind::kUnset;
  std::string text_;
};

std::string to_string(const StateValue &v);

// Slot -> state. A slot missing from the map is unset.
using SlotStates = std::map<std::string, StateValue>;

// Looks up a slot, treating absence as unset.
StateValue state_of(const SlotStates &states, const std::string &slot);

// One system utterance followed by the next user utterance.
struct Turn {
  std::vector<std::string> system_tokens;
  std::vector<DialogueAct> system_acts;
  std::vector<SlotSpan> system_spans;
  std::vector<std::string> user_tokens;
  std::vector<DialogueAct> user_acts;
  std::vector<SlotSpan> user_spans;
  SlotStates gold_state;

  bool operator==(const Turn &) const = default;
};

struct Dialogue {
  std::string id;
  std::string domain;
  std::vector<Turn> turns;

  bool operator==(const Dialogue &) const = default;
};

struct DomainSchema {
  std::string domain;
  std::vector<std::string> slots;
  std::vector<std::string> user_act_inventory;
  std::vector<std::string> system_act_inventory;
  // Only used by the synthetic generator.
  std::map<std::string, std::vector<std::string>> value_inventory;
  // Optional surface phrase per slot for generated text ("number of people").
  std::map<std::string, std::string> slot_phrases;

  bool has_slot(std::string_view slot) const;
  bool operator==(const DomainSchema &) const = default;
};

struct Violation {
  int turn = -1;  // -1 for dialogue-level problems
  std::string message;
};

// Checks spans, act inventories, state keys and canonical forms. Returns an
// empty list iff the dialogue is well formed.
std::vector<Violation> validate_dialogue(const Dialogue &d,
                                         const DomainSchema &schema);

// Lowercases, trims, and collapses internal whitespace runs to one space.
std::string canonicalize_value(std::string_view raw);

// Lowercases, splits on whitespace and detaches punctuation characters as
// separate tokens.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(const std::vector<std::string> &tokens, int start,
                        int end);

}  // namespace sdst

#endif  // SDST_DIALOGUE_H_
