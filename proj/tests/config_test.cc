#include <gtest/gtest.h>

#include <cstdlib>

#include "sdst/config.h"
#include "sdst/errors.h"
#include "test_util.h"

namespace sdst {
namespace {

TEST(KeyValuesTest, ParsesCommentsAndWhitespace) {
  const KeyValues kv =
      KeyValues::parse("# header\n\n learning_rate = 0.01 \nseed=4\nlist = 1, 2,3\n", "a.cfg");
  EXPECT_EQ(kv.get_double("learning_rate", 0.0), 0.01);
  EXPECT_EQ(kv.get_uint64("seed", 0), 4u);
  EXPECT_EQ(kv.get_int_list("list", {}), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(kv.get_int("missing", 9), 9);
  EXPECT_EQ(kv.get_string("missing", "x"), "x");
}

TEST(KeyValuesTest, ErrorsNameOriginAndLine) {
  try {
    KeyValues::parse("a=1\nno equals sign\n", "bad.cfg");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError &e) {
    EXPECT_NE(std::string(e.what()).find("bad.cfg:2"), std::string::npos);
  }
  EXPECT_THROW(KeyValues::parse("a=1\na=2\n", "dup.cfg"), ConfigError);
  const KeyValues kv = KeyValues::parse("n=abc\nx=1.5.2\n", "t.cfg");
  EXPECT_THROW(kv.get_int("n", 0), ConfigError);
  EXPECT_THROW(kv.get_double("x", 0), ConfigError);
  EXPECT_THROW(kv.require_known({"n"}), ConfigError);
  EXPECT_NO_THROW(kv.require_known({"n", "x"}));
  EXPECT_THROW(KeyValues::load("/nonexistent/sdst.cfg"), DataError);
}

TEST(TrainConfigTest, DefaultsAndOverrides) {
  const TrainConfig d = train_config_from(KeyValues::parse("", "empty"));
  EXPECT_EQ(d.embedding_dim, 50);
  EXPECT_EQ(d.learning_rate, 0.001);
  EXPECT_EQ(d.capacity, 7);
  EXPECT_EQ(d.sharing, SharingMode::kShared);
  EXPECT_EQ(d.slate_miss_policy, SlateMissPolicy::kSkip);
  const TrainConfig c = train_config_from(KeyValues::parse(
      "sharing_mode=per_slot\nslate_miss_policy=map_to_null\ngru_hidden_dim=12\n", "c"));
  EXPECT_EQ(c.sharing, SharingMode::kPerSlot);
  EXPECT_EQ(c.slate_miss_policy, SlateMissPolicy::kMapToNull);
  EXPECT_EQ(c.gru_hidden_dim, 12);
  EXPECT_EQ(c.model_config().gru_hidden_dim, 12);
}

TEST(TrainConfigTest, RoundTripsThroughText) {
  TrainConfig c;
  c.learning_rate = 0.1;
  c.seed = 77;
  c.sharing = SharingMode::kPerSlot;
  const TrainConfig back = train_config_from(KeyValues::parse(format_train_config(c), "rt"));
  EXPECT_EQ(format_train_config(back), format_train_config(c));
}

TEST(TrainConfigTest, InvalidValuesRejected) {
  EXPECT_THROW(train_config_from(KeyValues::parse("embedding_dim=0\n", "c")), ConfigError);
  EXPECT_THROW(train_config_from(KeyValues::parse("learning_rate=0\n", "c")), ConfigError);
  EXPECT_THROW(train_config_from(KeyValues::parse("sharing_mode=some\n", "c")), ConfigError);
  EXPECT_THROW(train_config_from(KeyValues::parse("unknown_key=1\n", "c")), ConfigError);
}

TEST(SeedOverrideTest, ReadsEnvironment) {
  ::unsetenv(kSeedEnvVar);
  EXPECT_FALSE(seed_override_from_env().has_value());
  ::setenv(kSeedEnvVar, "123", 1);
  EXPECT_EQ(seed_override_from_env(), std::optional<uint64_t>(123));
  ::setenv(kSeedEnvVar, "twelve", 1);
  EXPECT_THROW(seed_override_from_env(), ConfigError);
  ::unsetenv(kSeedEnvVar);
}

}  // namespace
}  // namespace sdst
