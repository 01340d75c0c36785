#ifndef SDST_FEATURES_H_
#define SDST_FEATURES_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "sdst/candidate_set.h"
#include "sdst/delexicalizer.h"
#include "sdst/dialogue.h"
#include "sdst/tensor.h"

namespace sdst {

// User and system act names known to a model; act-vector bits follow this
// order. Acts outside the inventory are ignored when featurizing.
class ActInventory {
 public:
  ActInventory() = default;
  ActInventory(std::vector<std::string> user, std::vector<std::string> system);

  const std::vector<std::string> &user() const { return user_; }
  const std::vector<std::string> &system() const { return system_; }
  int user_size() const { return static_cast<int>(user_.size()); }
  int system_size() const { return static_cast<int>(system_.size()); }
  int user_index(const std::string &act) const;
  int system_index(const std::string &act) const;

  // Union preserving first-seen order.
  static ActInventory merge(const std::vector<ActInventory> &parts);

  bool operator==(const ActInventory &o) const {
    return user_ == o.user_ && system_ == o.system_;
  }

 private:
  std::vector<std::string> user_;
  std::vector<std::string> system_;
  std::unordered_map<std::string, int> user_index_;
  std::unordered_map<std::string, int> system_index_;
};

// Binary act indicators for one turn:
//   user_free / system_free:   acts without a slot argument (a_u, a'_u)
//   user_slot / system_slot:   acts with slot s and no value (a_s, a'_s)
//   user_value / system_value: acts with slot s and value c (a_c, a'_c)
class ActVectors {
 public:
  ActVectors(const ActInventory &inventory, const std::vector<DialogueAct> &user,
             const std::vector<DialogueAct> &system);

  const Vector &user_free() const { return user_free_; }
  const Vector &system_free() const { return system_free_; }
  Vector user_slot(const std::string &slot) const;
  Vector system_slot(const std::string &slot) const;
  Vector user_value(const std::string &slot, const std::string &value) const;
  Vector system_value(const std::string &slot, const std::string &value) const;

 private:
  const ActInventory *inventory_;
  const std::vector<DialogueAct> *user_;
  const std::vector<DialogueAct> *system_;
  Vector user_free_;
  Vector system_free_;
};

// Feature dimensions for hidden size d and the act inventory sizes.
struct FeatureLayout {
  FeatureLayout(int hidden_dim, int user_acts, int system_acts);

  int hidden_dim;
  int user_acts;
  int system_acts;

  int utterance_dim() const { return 4 * hidden_dim + user_acts + system_acts; }
  int slot_dim() const { return user_acts + system_acts + 2; }
  int shared_dim() const { return utterance_dim() + slot_dim(); }  // |g|
  int candidate_dim() const { return user_acts + system_acts + 1 + 8 * hidden_dim; }
  int full_dim() const { return shared_dim() + candidate_dim(); }  // |f|

  // Offsets inside r_utt.
  int user_summary_offset() const { return 0; }
  int system_summary_offset() const { return 2 * hidden_dim + user_acts; }
  // Offsets inside r_slot.
  int prev_dontcare_offset() const { return user_acts + system_acts; }
  int prev_null_offset() const { return user_acts + system_acts + 1; }
  // Offsets inside r_cand.
  int prev_score_offset() const { return user_acts + system_acts; }
  int user_states_offset() const { return user_acts + system_acts + 1; }
  int system_states_offset() const { return user_states_offset() + 4 * hidden_dim; }
};

// r_utt = c + a_u + c' + a'_u (concatenation).
Vector featurize_utterances(const Vector &user_summary, const Vector &system_summary,
                            const ActVectors &acts);

// r_slot(s) = a_s(s) + a'_s(s) + p_dontcare(t-1) + p_null(t-1).
Vector featurize_slot(const std::string &slot, const ActVectors &acts,
                      const Distribution &prev);

struct CandidatePositions {
  std::vector<int> user;    // T
  std::vector<int> system;  // T'
};

CandidatePositions candidate_positions(const std::string &slot,
                                       const std::string &value,
                                       const DelexUtterance &user,
                                       const DelexUtterance &system);

// r_cand(c) = a_c + a'_c + p_c(t-1) + sum_{k in T} h_k + sum_{k in T'} h'_k.
// Empty position sets contribute zero vectors.
Vector featurize_candidate(const std::string &slot, const std::string &value,
                           const CandidatePositions &positions,
                           const Matrix &user_states, const Matrix &system_states,
                           const ActVectors &acts, double prev_score);

}  // namespace sdst

#endif  // SDST_FEATURES_H_
