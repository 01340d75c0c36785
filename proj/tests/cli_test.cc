#include <gtest/gtest.h>

#include "test_util.h"

namespace sdst {
namespace {

using testing::read_file;
using testing::run_command;
using testing::temp_dir;
using testing::write_file;

const std::string kCli = SDST_CLI_PATH;

int run(const std::string &args, const std::filesystem::path &log) {
  return run_command(kCli + " " + args + " > " + log.string() + " 2>&1");
}

TEST(CliTest, GradcheckSmallPasses) {
  const auto dir = temp_dir("cli_gradcheck");
  EXPECT_EQ(run("gradcheck --dims small", dir / "out.txt"), 0);
  EXPECT_NE(read_file(dir / "out.txt").find("max_relative_error"), std::string::npos);
}

TEST(CliTest, GenerateIsDeterministic) {
  const auto dir = temp_dir("cli_generate");
  const std::string flags = " --schema builtin:movie --seed 3 --train 20 --dev 5 --test 10";
  ASSERT_EQ(run("generate" + flags + " --out " + (dir / "a").string(), dir / "a.log"), 0)
      << read_file(dir / "a.log");
  ASSERT_EQ(run("generate" + flags + " --out " + (dir / "b").string(), dir / "b.log"), 0);
  for (const char *f : {"corpus.jsonl", "schema.json", "stats.txt"}) {
    const std::string a = read_file(dir / "a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, read_file(dir / "b" / f)) << f;
  }
}

TEST(CliTest, MissingModelExitsTwoNamingPath) {
  const auto dir = temp_dir("cli_missing");
  const std::string model = (dir / "no_such_model.json").string();
  EXPECT_EQ(run("eval --model " + model + " --corpus " + (dir / "c.jsonl").string() +
                    " --split test --report " + (dir / "r.txt").string(),
                dir / "log"),
            2);
  EXPECT_NE(read_file(dir / "log").find("no_such_model.json"), std::string::npos);
}

TEST(CliTest, UsageErrorsExitOne) {
  const auto dir = temp_dir("cli_usage");
  EXPECT_EQ(run("", dir / "log"), 1);
  EXPECT_EQ(run("frobnicate", dir / "log"), 1);
  EXPECT_EQ(run("train --corpus x", dir / "log"), 1);
  EXPECT_EQ(run("gradcheck --dims huge", dir / "log"), 1);
}

TEST(CliTest, HelpListsFlags) {
  const auto dir = temp_dir("cli_help");
  for (const char *sub : {"generate", "convert", "train", "grid", "eval", "transfer", "track",
                          "gradcheck"}) {
    EXPECT_EQ(run(std::string(sub) + " --help", dir / "log"), 0) << sub;
    EXPECT_NE(read_file(dir / "log").find("--"), std::string::npos) << sub;
  }
}

TEST(CliTest, TrainEvalTrackPipeline) {
  const auto dir = temp_dir("cli_pipeline");
  ASSERT_EQ(run("generate --schema builtin:restaurant --seed 2 --train 12 --dev 4 --test 4 --oov 0.4 "
                "--out " + (dir / "gen").string(),
                dir / "gen.log"),
            0)
      << read_file(dir / "gen.log");
  write_file(dir / "train.cfg",
             "embedding_dim=6\ngru_hidden_dim=6\nscorer_hidden_dim=6\nlearning_rate=0.01\n"
             "max_epochs=2\npatience=2\n");
  const std::string corpus = (dir / "gen" / "corpus.jsonl").string();
  const std::string model = (dir / "model.json").string();
  ASSERT_EQ(run("train --corpus " + corpus + " --config " + (dir / "train.cfg").string() +
                    " --out " + model,
                dir / "train.log"),
            0)
      << read_file(dir / "train.log");
  EXPECT_FALSE(read_file(model + ".history.jsonl").empty());

  const std::string report = (dir / "report.txt").string();
  ASSERT_EQ(run("eval --model " + model + " --corpus " + corpus + " --split test --report " + report,
                dir / "eval.log"),
            0)
      << read_file(dir / "eval.log");
  EXPECT_NE(read_file(report).find("joint_goal_accuracy="), std::string::npos);
  EXPECT_FALSE(read_file(report + ".dialogues.tsv").empty());

  ASSERT_EQ(run("track --model " + model + " --dialogue-file " + corpus +
                    " --dialogue-id restaurant-test-00000 --out " + (dir / "track.jsonl").string(),
                dir / "track.log"),
            0)
      << read_file(dir / "track.log");
  const std::string track = read_file(dir / "track.jsonl");
  EXPECT_NE(track.find("\"probabilities\""), std::string::npos);
  EXPECT_NE(track.find("restaurant-test-00000"), std::string::npos);

  write_file(dir / "bad.cfg", "embedding_dim=-3\n");
  EXPECT_EQ(run("train --corpus " + corpus + " --config " + (dir / "bad.cfg").string() +
                    " --out " + (dir / "m2.json").string(),
                dir / "bad.log"),
            1);
}

}  // namespace
}  // namespace sdst
