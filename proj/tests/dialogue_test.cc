#include "sdst/dialogue.h"

#include <gtest/gtest.h>

#include "test_util.h"

namespace sdst {
namespace {

using testing::toy_dialogue;
using testing::toy_schema;

TEST(StateValueTest, KindsAreDistinct) {
  EXPECT_NE(StateValue::unset(), StateValue::dontcare());
  EXPECT_NE(StateValue::value("cheap"), StateValue::dontcare());
  EXPECT_EQ(StateValue::value("cheap"), StateValue::value("cheap"));
  EXPECT_THROW(StateValue::value(""), std::invalid_argument);
}

TEST(StateValueTest, AbsentSlotIsUnset) {
  SlotStates s = {{"food", StateValue::value("thai")}};
  EXPECT_EQ(state_of(s, "area"), StateValue::unset());
  EXPECT_EQ(state_of(s, "food").text(), "thai");
}

TEST(TokenizeTest, LowercasesAndSplitsPunctuation) {
  EXPECT_EQ(tokenize("How about 7 PM?"),
            (std::vector<std::string>{"how", "about", "7", "pm", "?"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(CanonicalizeTest, CollapsesWhitespace) {
  EXPECT_EQ(canonicalize_value("  Old   Town "), "old town");
}

TEST(ValidateTest, ToyDialogueIsValid) {
  EXPECT_TRUE(validate_dialogue(toy_dialogue(), toy_schema()).empty());
}

TEST(ValidateTest, RejectsOverlappingSpans) {
  Dialogue d = toy_dialogue();
  d.turns[0].user_spans.push_back({"food", "thai food", 0, 2});
  const auto v = validate_dialogue(d, toy_schema());
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().turn, 0);
}

TEST(ValidateTest, RejectsSpanTextMismatch) {
  Dialogue d = toy_dialogue();
  d.turns[0].user_spans[0].value = "indian";
  EXPECT_FALSE(validate_dialogue(d, toy_schema()).empty());
}

TEST(ValidateTest, RejectsUnknownSlotAndAct) {
  Dialogue d = toy_dialogue();
  d.turns[0].gold_state["parking"] = StateValue::value("yes");
  EXPECT_FALSE(validate_dialogue(d, toy_schema()).empty());

  d = toy_dialogue();
  d.turns[1].user_acts.push_back({"thank_you", std::nullopt, std::nullopt});
  EXPECT_FALSE(validate_dialogue(d, toy_schema()).empty());
}

TEST(ValidateTest, ValueRequiresSlot) {
  Dialogue d = toy_dialogue();
  d.turns[1].user_acts.push_back({"inform", std::nullopt, "thai"});
  EXPECT_FALSE(validate_dialogue(d, toy_schema()).empty());
}

TEST(ValidateTest, RejectsNonCanonicalTokens) {
  Dialogue d = toy_dialogue();
  d.turns[0].user_tokens[1] = "Food";
  EXPECT_FALSE(validate_dialogue(d, toy_schema()).empty());
}

}  // namespace
}  // namespace sdst
