#ifndef SDST_CANDIDATE_SET_H_
#define SDST_CANDIDATE_SET_H_

#include <string>
#include <vector>

namespace sdst {

inline constexpr int kDefaultCapacity = 7;

struct ScoredCandidate {
  std::string value;
  double score = 0.0;  // probability from the previous turn, 0 when fresh

  bool operator==(const ScoredCandidate &) const = default;
};

// Bounded, ordered set of candidate values for one slot.
class ScoredCandidateSet {
 public:
  ScoredCandidateSet(std::string slot, int capacity);

  const std::string &slot() const { return slot_; }
  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const std::vector<ScoredCandidate> &entries() const { return entries_; }

  // Index of `value`, or -1.
  int find(const std::string &value) const;
  // Appends if absent and not full; returns false otherwise.
  bool try_add(const std::string &value, double score);
  void set_score(int index, double score) { entries_.at(index).score = score; }

  bool operator==(const ScoredCandidateSet &) const = default;

 private:
  std::string slot_;
  int capacity_;
  std::vector<ScoredCandidate> entries_;
};

struct CandidateUpdate {
  ScoredCandidateSet set;
  // Distinct current-turn mentions that did not fit (warning when > 0).
  int truncated = 0;
};

// Builds C_s^t: current user mentions, then system mentions, then external
// mentions, then previous candidates by decreasing score (ties keep previous
// order), each added only if absent and while there is room. Values already
// present in `prev` keep their previous score; others start at 0.
CandidateUpdate update_candidate_set(const ScoredCandidateSet &prev,
                                     const std::vector<std::string> &user_mentions,
                                     const std::vector<std::string> &system_mentions,
                                     const std::vector<std::string> &extra_mentions,
                                     int capacity);

// Fixed-size slate: K candidate positions (real candidates packed first,
// then PAD), followed by the dontcare and null positions.
class ValueSlate {
 public:
  explicit ValueSlate(const ScoredCandidateSet &cs);

  const std::string &slot() const { return slot_; }
  int capacity() const { return capacity_; }
  int size() const { return capacity_ + 2; }
  int num_candidates() const { return static_cast<int>(values_.size()); }
  int dontcare_index() const { return capacity_; }
  int null_index() const { return capacity_ + 1; }
  bool is_pad(int i) const { return i >= num_candidates() && i < capacity_; }
  bool is_candidate(int i) const { return i >= 0 && i < num_candidates(); }
  const std::string &value(int i) const { return values_.at(i); }
  const std::vector<std::string> &candidates() const { return values_; }
  // Index of a candidate value, or -1.
  int find(const std::string &value) const;

  // True at real candidate positions (length K).
  std::vector<bool> candidate_mask() const;
  // Softmax mask over all K+2 positions (PAD false).
  std::vector<bool> mask() const;
  // Display label per position: value, "<pad>", "<dontcare>", "<null>".
  std::string label(int i) const;

  bool operator==(const ValueSlate &) const = default;

 private:
  std::string slot_;
  int capacity_;
  std::vector<std::string> values_;
};

struct Distribution {
  ValueSlate slate;
  std::vector<double> probs;  // length slate.size()

  double dontcare() const { return probs[slate.dontcare_index()]; }
  double null() const { return probs[slate.null_index()]; }
};

// Start-of-dialogue distribution: all mass on null. Throws ConfigError when
// the slate has real candidates.
Distribution initial_distribution(const ValueSlate &slate);

}  // namespace sdst

#endif  // SDST_CANDIDATE_SET_H_
