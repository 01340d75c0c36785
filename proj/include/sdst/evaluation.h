#ifndef SDST_EVALUATION_H_
#define SDST_EVALUATION_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sdst/candidate_set.h"
#include "sdst/dialogue.h"
#include "sdst/tracker_model.h"

namespace sdst {

using SlotDistributions = std::map<std::string, Distribution>;

// Argmax among non-PAD, non-null positions whose probability exceeds
// `threshold`; the dontcare position yields dontcare. Slots with no such
// position are left out of the result (unset). Ties go to slate order.
SlotStates select_assignments(const SlotDistributions &dists, double threshold);

// Fraction of turns whose states match gold on every slot. Throws ConfigError
// when the sequences differ in length or are empty.
double joint_goal_accuracy(const std::vector<SlotStates> &pred,
                           const std::vector<SlotStates> &gold);

// 0.05, 0.10, ..., 0.95.
std::vector<double> default_threshold_grid();

// Distributions for every turn of every dialogue, in split order.
struct SplitDistributions {
  std::vector<std::vector<SlotDistributions>> dialogues;
  int truncation_warnings = 0;
};

SplitDistributions track_split(const TrackerModel &model,
                               const std::vector<Dialogue> &split);

double joint_goal_accuracy(const SplitDistributions &dists,
                           const std::vector<Dialogue> &split, double threshold);

struct ThresholdChoice {
  double threshold = kDefaultThreshold;
  double jga = 0.0;
};

// Best dev joint goal accuracy over `grid`; ties go to the lower threshold.
ThresholdChoice tune_threshold(const SplitDistributions &dists,
                               const std::vector<Dialogue> &dev,
                               const std::vector<double> &grid);
ThresholdChoice tune_threshold(const TrackerModel &model, const std::vector<Dialogue> &dev,
                               const std::vector<double> &grid = default_threshold_grid());

// Rule tracker used as the comparison point. Per turn and slot, in order:
//   1. a system act carrying a value followed by a user affirm adopts that value;
//   2. a user negate naming the slot (or a slot-free negate of a value the
//      system just offered) clears the held value it refers to;
//   3. the last user span for the slot, by position, or else the last user
//      inform act value, becomes the held value;
//   4. a user dontcare act for the slot sets dontcare.
std::vector<SlotStates> rule_baseline_track(const Dialogue &d);

double rule_baseline_jga(const std::vector<Dialogue> &split);

// Joint goal accuracy of a tracker that leaves every slot unset.
double all_null_jga(const std::vector<Dialogue> &split);

struct DialogueMetrics {
  std::string id;
  int turns = 0;
  int correct_turns = 0;
};

struct MetricsReport {
  double joint_goal_accuracy = 0.0;
  std::map<std::string, double> slot_accuracy;
  double slate_recall = 1.0;  // 1 when no gold value is set
  double threshold = kDefaultThreshold;
  int turns = 0;
  int truncation_warnings = 0;
  std::vector<DialogueMetrics> dialogues;
};

MetricsReport evaluate(const TrackerModel &model, const std::vector<Dialogue> &split,
                       double threshold);

// Line-oriented key=value text.
std::string format_report(const MetricsReport &r);
// Tab-separated rows: id, turns, correct_turns, joint_goal_accuracy.
std::string format_dialogue_breakdown(const MetricsReport &r);
// Writes the key=value report to `path` and the breakdown to
// `path` + ".dialogues.tsv".
void write_report(const MetricsReport &r, const std::filesystem::path &path);

}  // namespace sdst

#endif  // SDST_EVALUATION_H_
