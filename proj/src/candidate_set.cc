#include "sdst/candidate_set.h"

#include <algorithm>
#include <numeric>

#include "sdst/errors.h"

namespace sdst {

ScoredCandidateSet::ScoredCandidateSet(std::string slot, int capacity)
    : slot_(std::move(slot)), capacity_(capacity) {
  if (capacity < 1) throw ConfigError("candidate set capacity must be >= 1");
}

int ScoredCandidateSet::find(const std::string &value) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].value == value) return static_cast<int>(i);
  }
  return -1;
}

bool ScoredCandidateSet::try_add(const std::string &value, double score) {
  if (size() >= capacity_ || find(value) >= 0) return false;
  entries_.push_back({value, score});
  return true;
}

CandidateUpdate update_candidate_set(const ScoredCandidateSet &prev,
                                     const std::vector<std::string> &user_mentions,
                                     const std::vector<std::string> &system_mentions,
                                     const std::vector<std::string> &extra_mentions,
                                     int capacity) {
  CandidateUpdate out{ScoredCandidateSet(prev.slot(), capacity), 0};
  std::vector<std::string> dropped;
  auto add_mention = [&](const std::string &v) {
    if (out.set.find(v) >= 0) return;
    const int i = prev.find(v);
    const double score = i >= 0 ? prev.entries()[i].score : 0.0;
    if (out.set.try_add(v, score)) return;
    if (std::find(dropped.begin(), dropped.end(), v) == dropped.end()) dropped.push_back(v);
  };
  for (const auto &v : user_mentions) add_mention(v);
  for (const auto &v : system_mentions) add_mention(v);
  for (const auto &v : extra_mentions) add_mention(v);
  out.truncated = static_cast<int>(dropped.size());

  std::vector<int> order(prev.entries().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return prev.entries()[a].score > prev.entries()[b].score;
  });
  for (int i : order) {
    if (out.set.size() >= capacity) break;
    out.set.try_add(prev.entries()[i].value, prev.entries()[i].score);
  }
  return out;
}

ValueSlate::ValueSlate(const ScoredCandidateSet &cs)
    : slot_(cs.slot()), capacity_(cs.capacity()) {
  values_.reserve(cs.entries().size());
  for (const auto &e : cs.entries()) values_.push_back(e.value);
}

int ValueSlate::find(const std::string &value) const {
  for (size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == value) return static_cast<int>(i);
  }
  return -1;
}

std::vector<bool> ValueSlate::candidate_mask() const {
  std::vector<bool> m(capacity_, false);
  for (int i = 0; i < num_candidates(); ++i) m[i] = true;
  return m;
}

std::vector<bool> ValueSlate::mask() const {
  std::vector<bool> m = candidate_mask();
  m.push_back(true);
  m.push_back(true);
  return m;
}

std::string ValueSlate::label(int i) const {
  if (is_candidate(i)) return values_[i];
  if (i == dontcare_index()) return "<dontcare>";
  if (i == null_index()) return "<null>";
  return "<pad>";
}

Distribution initial_distribution(const ValueSlate &slate) {
  if (slate.num_candidates() != 0) {
    throw ConfigError("initial distribution requires an empty slate for slot '" +
                      slate.slot() + "'");
  }
  Distribution d{slate, std::vector<double>(slate.size(), 0.0)};
  d.probs[slate.null_index()] = 1.0;
  return d;
}

}  // namespace sdst
