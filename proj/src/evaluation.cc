#include "sdst/evaluation.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdst/errors.h"
#include "sdst/tracker.h"

namespace sdst {
namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

bool states_equal(const SlotStates &a, const SlotStates &b) {
  for (const auto &[slot, v] : a) {
    if (state_of(b, slot) != v) return false;
  }
  for (const auto &[slot, v] : b) {
    if (state_of(a, slot) != v) return false;
  }
  return true;
}

bool has_act(const std::vector<DialogueAct> &acts, const std::string &name) {
  for (const auto &a : acts) {
    if (a.act == name) return true;
  }
  return false;
}

}  // namespace

SlotStates select_assignments(const SlotDistributions &dists, double threshold) {
  SlotStates out;
  for (const auto &[slot, dist] : dists) {
    const ValueSlate &slate = dist.slate;
    int best = -1;
    for (int i = 0; i < slate.size(); ++i) {
      if (slate.is_pad(i) || i == slate.null_index()) continue;
      if (dist.probs[i] <= threshold) continue;
      if (best < 0 || dist.probs[i] > dist.probs[best]) best = i;
    }
    if (best < 0) continue;
    out[slot] = best == slate.dontcare_index() ? StateValue::dontcare()
                                               : StateValue::value(slate.value(best));
  }
  return out;
}

double joint_goal_accuracy(const std::vector<SlotStates> &pred,
                           const std::vector<SlotStates> &gold) {
  if (pred.size() != gold.size()) {
    throw ConfigError("joint goal accuracy: " + std::to_string(pred.size()) +
                      " predicted turns vs " + std::to_string(gold.size()) + " gold turns");
  }
  if (pred.empty()) throw ConfigError("joint goal accuracy: no turns");
  size_t correct = 0;
  for (size_t i = 0; i < pred.size(); ++i) {
    if (states_equal(pred[i], gold[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i * 0.05);
  return grid;
}

SplitDistributions track_split(const TrackerModel &model,
                               const std::vector<Dialogue> &split) {
  SplitDistributions out;
  out.dialogues.reserve(split.size());
  for (const Dialogue &d : split) {
    int warnings = 0;
    out.dialogues.push_back(track_distributions(d, model, &warnings));
    out.truncation_warnings += warnings;
  }
  return out;
}

double joint_goal_accuracy(const SplitDistributions &dists,
                           const std::vector<Dialogue> &split, double threshold) {
  std::vector<SlotStates> pred, gold;
  for (size_t i = 0; i < split.size(); ++i) {
    for (size_t t = 0; t < split[i].turns.size(); ++t) {
      pred.push_back(select_assignments(dists.dialogues.at(i).at(t), threshold));
      gold.push_back(split[i].turns[t].gold_state);
    }
  }
  return joint_goal_accuracy(pred, gold);
}

ThresholdChoice tune_threshold(const SplitDistributions &dists,
                               const std::vector<Dialogue> &dev,
                               const std::vector<double> &grid) {
  if (grid.empty()) throw ConfigError("threshold grid is empty");
  ThresholdChoice best;
  bool first = true;
  for (double t : grid) {
    if (!(t > 0.0 && t < 1.0)) {
      throw ConfigError("threshold " + std::to_string(t) + " outside (0, 1)");
    }
    const double jga = joint_goal_accuracy(dists, dev, t);
    if (first || jga > best.jga || (jga == best.jga && t < best.threshold)) {
      best = {t, jga};
      first = false;
    }
  }
  return best;
}

ThresholdChoice tune_threshold(const TrackerModel &model, const std::vector<Dialogue> &dev,
                               const std::vector<double> &grid) {
  return tune_threshold(track_split(model, dev), dev, grid);
}

std::vector<SlotStates> rule_baseline_track(const Dialogue &d) {
  std::vector<SlotStates> out;
  SlotStates held;
  for (const Turn &turn : d.turns) {
    const bool affirm = has_act(turn.user_acts, "affirm");
    const bool bare_negate = [&] {
      for (const auto &a : turn.user_acts) {
        if (a.act == "negate" && !a.slot) return true;
      }
      return false;
    }();
    // System values offered this turn, by slot.
    std::map<std::string, std::string> offered;
    for (const auto &a : turn.system_acts) {
      if (a.slot && a.value) offered[*a.slot] = *a.value;
    }
    if (affirm) {
      for (const auto &[slot, v] : offered) held[slot] = StateValue::value(v);
    }
    if (bare_negate) {
      for (const auto &[slot, v] : offered) {
        auto it = held.find(slot);
        if (it != held.end() && it->second == StateValue::value(v)) held.erase(it);
      }
    }
    for (const auto &a : turn.user_acts) {
      if (a.act != "negate" || !a.slot) continue;
      auto it = held.find(*a.slot);
      if (it == held.end()) continue;
      if (!a.value || it->second == StateValue::value(*a.value)) held.erase(it);
    }
    std::map<std::string, const SlotSpan *> last_span;
    for (const SlotSpan &s : turn.user_spans) {
      auto it = last_span.find(s.slot);
      if (it == last_span.end() || s.start > it->second->start) last_span[s.slot] = &s;
    }
    std::map<std::string, std::string> informed;
    for (const auto &a : turn.user_acts) {
      if (a.act == "inform" && a.slot && a.value) informed[*a.slot] = *a.value;
    }
    for (const auto &[slot, s] : last_span) informed[slot] = s->value;
    for (const auto &[slot, v] : informed) held[slot] = StateValue::value(v);
    for (const auto &a : turn.user_acts) {
      if (a.act == "dontcare" && a.slot) held[*a.slot] = StateValue::dontcare();
    }
    out.push_back(held);
  }
  return out;
}

double rule_baseline_jga(const std::vector<Dialogue> &split) {
  std::vector<SlotStates> pred, gold;
  for (const Dialogue &d : split) {
    for (auto &s : rule_baseline_track(d)) pred.push_back(std::move(s));
    for (const Turn &t : d.turns) gold.push_back(t.gold_state);
  }
  return joint_goal_accuracy(pred, gold);
}

double all_null_jga(const std::vector<Dialogue> &split) {
  std::vector<SlotStates> pred, gold;
  for (const Dialogue &d : split) {
    for (const Turn &t : d.turns) {
      pred.emplace_back();
      gold.push_back(t.gold_state);
    }
  }
  return joint_goal_accuracy(pred, gold);
}

MetricsReport evaluate(const TrackerModel &model, const std::vector<Dialogue> &split,
                       double threshold) {
  MetricsReport r;
  r.threshold = threshold;
  std::map<std::string, int> slot_correct;
  std::map<std::string, int> slot_total;
  int correct_turns = 0;
  int gold_values = 0;
  int recalled = 0;
  for (const Dialogue &d : split) {
    int warnings = 0;
    const auto dists = track_distributions(d, model, &warnings);
    r.truncation_warnings += warnings;
    DialogueMetrics dm;
    dm.id = d.id;
    dm.turns = static_cast<int>(d.turns.size());
    for (size_t t = 0; t < d.turns.size(); ++t) {
      const SlotStates &gold = d.turns[t].gold_state;
      const SlotStates pred = select_assignments(dists[t], threshold);
      for (const std::string &slot : model.slots_for(d.domain)) {
        const bool ok = state_of(pred, slot) == state_of(gold, slot);
        slot_correct[slot] += ok ? 1 : 0;
        slot_total[slot] += 1;
      }
      for (const auto &[slot, v] : gold) {
        if (!v.is_value()) continue;
        ++gold_values;
        if (dists[t].at(slot).slate.find(v.text()) >= 0) ++recalled;
      }
      if (states_equal(pred, gold)) {
        ++dm.correct_turns;
        ++correct_turns;
      }
      ++r.turns;
    }
    r.dialogues.push_back(std::move(dm));
  }
  if (r.turns == 0) throw ConfigError("evaluation split has no turns");
  r.joint_goal_accuracy = static_cast<double>(correct_turns) / r.turns;
  for (const auto &[slot, total] : slot_total) {
    r.slot_accuracy[slot] = static_cast<double>(slot_correct[slot]) / total;
  }
  if (gold_values > 0) r.slate_recall = static_cast<double>(recalled) / gold_values;
  return r;
}

std::string format_report(const MetricsReport &r) {
  std::ostringstream out;
  out << "joint_goal_accuracy=" << fmt(r.joint_goal_accuracy) << "\n";
  out << "slate_recall=" << fmt(r.slate_recall) << "\n";
  out << "threshold=" << fmt(r.threshold) << "\n";
  out << "turns=" << r.turns << "\n";
  out << "dialogues=" << r.dialogues.size() << "\n";
  out << "truncation_warnings=" << r.truncation_warnings << "\n";
  for (const auto &[slot, acc] : r.slot_accuracy) {
    out << "slot_accuracy." << slot << "=" << fmt(acc) << "\n";
  }
  return out.str();
}

std::string format_dialogue_breakdown(const MetricsReport &r) {
  std::ostringstream out;
  out << "dialogue_id\tturns\tcorrect_turns\tjoint_goal_accuracy\n";
  for (const auto &d : r.dialogues) {
    const double jga = d.turns > 0 ? static_cast<double>(d.correct_turns) / d.turns : 0.0;
    out << d.id << "\t" << d.turns << "\t" << d.correct_turns << "\t" << fmt(jga) << "\n";
  }
  return out.str();
}

void write_report(const MetricsReport &r, const std::filesystem::path &path) {
  auto write = [](const std::filesystem::path &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw DataError("cannot write " + p.string());
    f << text;
    if (!f) throw DataError("failed writing " + p.string());
  };
  write(path, format_report(r));
  write(path.string() + ".dialogues.tsv", format_dialogue_breakdown(r));
}

}  // namespace sdst
