#ifndef SDST_TRACKER_H_
#define SDST_TRACKER_H_

#include <map>
#include <string>
#include <vector>

#include "sdst/candidate_set.h"
#include "sdst/dialogue.h"
#include "sdst/encoder.h"
#include "sdst/features.h"
#include "sdst/scorer.h"
#include "sdst/tracker_model.h"

namespace sdst {

struct SlotTrack {
  ScoredCandidateSet candidates;  // scores equal `distribution` probabilities
  Distribution distribution;
};

// Per-dialogue tracking state carried from one turn to the next.
struct TurnTrackState {
  std::vector<std::string> slot_order;
  std::map<std::string, SlotTrack> slots;
  int truncation_warnings = 0;  // slots whose mentions overflowed this turn
};

TurnTrackState initial_track_state(const TrackerModel &model,
                                   const std::vector<std::string> &slots);

struct SlotTurnTrace {
  std::string slot;
  // Index of each candidate in the previous turn's slate, -1 when fresh.
  std::vector<int> prev_index;
  std::vector<CandidatePositions> positions;
  ScoreTrace score;
};

// Intermediate values of one turn, kept for the backward pass.
struct TurnTrace {
  EncoderTrace user;
  EncoderTrace system;
  Vector utterance_features;  // r_utt, shared verbatim by every slot
  std::vector<SlotTurnTrace> slots;  // in slot_order
};

// Token ids for a delexicalized utterance; an empty utterance becomes a
// single boundary token.
std::vector<int> utterance_ids(const Vocabulary &vocab,
                               const std::vector<std::string> &delex_tokens);

// Candidate mentions for one slot: user span values (by position) and user
// act values, then system act values.
void slot_mentions(const Turn &turn, const std::string &slot,
                   std::vector<std::string> *user, std::vector<std::string> *system);

// Delexicalize, update candidate sets, encode both utterances once, build
// features, and score every slot.
TurnTrackState track_turn(const TurnTrackState &prev, const Turn &turn,
                          const TrackerModel &model, TurnTrace *trace = nullptr);

// Accumulates gradients for a sequence of traced turns. `labels[t][i]` is the
// gold slate position for slot i at turn t, or -1 for no loss term. Previous-
// turn probabilities feed later features, so gradients flow across turns.
void backward_turns(const TrackerModel &model, const std::vector<TurnTrace> &traces,
                    const std::vector<std::vector<int>> &labels, Gradients *grads);

struct DialogueState {
  SlotStates assignments;
  std::map<std::string, Distribution> distributions;
  int truncation_warnings = 0;
};

// Per-turn distributions for every slot of the dialogue's domain.
std::vector<std::map<std::string, Distribution>> track_distributions(
    const Dialogue &d, const TrackerModel &model, int *truncation_warnings = nullptr);

// Folds track_turn over the dialogue and applies the model threshold.
std::vector<DialogueState> track_dialogue(const Dialogue &d, const TrackerModel &model);

}  // namespace sdst

#endif  // SDST_TRACKER_H_
