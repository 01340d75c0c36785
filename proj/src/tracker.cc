#include "sdst/tracker.h"

#include <algorithm>

#include "sdst/delexicalizer.h"
#include "sdst/errors.h"
#include "sdst/evaluation.h"
#include "sdst/ops.h"

namespace sdst {

TurnTrackState initial_track_state(const TrackerModel &model,
                                   const std::vector<std::string> &slots) {
  TurnTrackState s;
  s.slot_order = slots;
  for (const auto &slot : slots) {
    ScoredCandidateSet empty(slot, model.config().capacity);
    Distribution d = initial_distribution(ValueSlate(empty));
    s.slots.emplace(slot, SlotTrack{std::move(empty), std::move(d)});
  }
  return s;
}

std::vector<int> utterance_ids(const Vocabulary &vocab,
                               const std::vector<std::string> &delex_tokens) {
  if (delex_tokens.empty()) return {vocab.boundary_id()};
  std::vector<int> ids;
  ids.reserve(delex_tokens.size());
  for (const auto &tok : delex_tokens) ids.push_back(vocab.lookup(tok));
  return ids;
}

void slot_mentions(const Turn &turn, const std::string &slot,
                   std::vector<std::string> *user, std::vector<std::string> *system) {
  auto push = [](std::vector<std::string> *out, const std::string &v) {
    if (std::find(out->begin(), out->end(), v) == out->end()) out->push_back(v);
  };
  user->clear();
  system->clear();
  std::vector<const SlotSpan *> spans;
  for (const SlotSpan &s : turn.user_spans) {
    if (s.slot == slot) spans.push_back(&s);
  }
  std::stable_sort(spans.begin(), spans.end(),
                   [](const SlotSpan *a, const SlotSpan *b) { return a->start < b->start; });
  for (const SlotSpan *s : spans) push(user, s->value);
  for (const DialogueAct &a : turn.user_acts) {
    if (a.slot && a.value && *a.slot == slot) push(user, *a.value);
  }
  for (const DialogueAct &a : turn.system_acts) {
    if (a.slot && a.value && *a.slot == slot) push(system, *a.value);
  }
}

TurnTrackState track_turn(const TurnTrackState &prev, const Turn &turn,
                          const TrackerModel &model, TurnTrace *trace) {
  const FeatureLayout &layout = model.layout();
  const DelexUtterance user = delexicalize(turn.user_tokens, turn.user_spans);
  const DelexUtterance system = delexicalize(turn.system_tokens, turn.system_spans);
  const ActVectors acts(model.acts(), turn.user_acts, turn.system_acts);

  TurnTrace local;
  TurnTrace &tr = trace ? *trace : local;
  tr.user = encode_utterance(model.store(), model.encoder(),
                             utterance_ids(model.vocab(), user.tokens));
  tr.system = encode_utterance(model.store(), model.encoder(),
                               utterance_ids(model.vocab(), system.tokens));
  tr.utterance_features = featurize_utterances(tr.user.summary, tr.system.summary, acts);
  tr.slots.clear();

  TurnTrackState next;
  next.slot_order = prev.slot_order;
  for (const std::string &slot : prev.slot_order) {
    const SlotTrack &before = prev.slots.at(slot);
    std::vector<std::string> user_mentions, system_mentions;
    slot_mentions(turn, slot, &user_mentions, &system_mentions);
    CandidateUpdate update = update_candidate_set(
        before.candidates, user_mentions, system_mentions, {}, model.config().capacity);
    if (update.truncated > 0) ++next.truncation_warnings;
    const ValueSlate slate(update.set);

    SlotTurnTrace st;
    st.slot = slot;
    const Vector slot_features = featurize_slot(slot, acts, before.distribution);
    Vector shared(layout.shared_dim());
    shared << tr.utterance_features, slot_features;

    const int m = slate.num_candidates();
    Matrix candidates(layout.candidate_dim(), m);
    for (int i = 0; i < m; ++i) {
      const ScoredCandidate &c = update.set.entries()[i];
      st.positions.push_back(candidate_positions(slot, c.value, user, system));
      st.prev_index.push_back(before.distribution.slate.find(c.value));
      candidates.col(i) = featurize_candidate(slot, c.value, st.positions.back(),
                                              tr.user.states, tr.system.states,
                                              acts, c.score);
    }
    Distribution dist = score_slate(model.store(), model.scorer_for(slot), slate,
                                    shared, candidates, &st.score);
    for (int i = 0; i < m; ++i) update.set.set_score(i, dist.probs[i]);
    next.slots.emplace(slot, SlotTrack{std::move(update.set), std::move(dist)});
    tr.slots.push_back(std::move(st));
  }
  return next;
}

void backward_turns(const TrackerModel &model, const std::vector<TurnTrace> &traces,
                    const std::vector<std::vector<int>> &labels, Gradients *grads) {
  const FeatureLayout &layout = model.layout();
  const int d4 = 4 * layout.hidden_dim;
  const int d2 = 2 * layout.hidden_dim;
  const int turns = static_cast<int>(traces.size());
  // dL/dp for each turn and slot, filled in by the following turn.
  std::vector<std::vector<std::vector<double>>> d_probs(turns);
  for (int t = 0; t < turns; ++t) {
    for (const SlotTurnTrace &st : traces[t].slots) {
      d_probs[t].emplace_back(st.score.probs.size(), 0.0);
    }
  }

  Vector d_shared;
  Matrix d_candidates;
  for (int t = turns - 1; t >= 0; --t) {
    const TurnTrace &tr = traces[t];
    Vector d_utt = Vector::Zero(layout.utterance_dim());
    Matrix d_user = Matrix::Zero(d4, tr.user.states.cols());
    Matrix d_system = Matrix::Zero(d4, tr.system.states.cols());
    for (size_t i = 0; i < tr.slots.size(); ++i) {
      const SlotTurnTrace &st = tr.slots[i];
      const std::vector<double> &p = st.score.probs;
      std::vector<double> d_logits = softmax_backward(p, st.score.mask, d_probs[t][i]);
      const int label = labels[t][i];
      if (label >= 0 && p[label] >= kProbabilityFloor) {
        for (size_t j = 0; j < p.size(); ++j) {
          if (st.score.mask[j]) d_logits[j] += p[j] - (static_cast<int>(j) == label ? 1.0 : 0.0);
        }
      }
      score_backward(model.store(), model.scorer_for(st.slot), st.score, d_logits,
                     grads, &d_shared, &d_candidates);
      d_utt += d_shared.head(layout.utterance_dim());
      const auto d_slot = d_shared.tail(layout.slot_dim());
      if (t > 0) {
        std::vector<double> &dp = d_probs[t - 1][i];
        const int k = static_cast<int>(dp.size()) - 2;
        dp[k] += d_slot(layout.prev_dontcare_offset());
        dp[k + 1] += d_slot(layout.prev_null_offset());
      }
      for (size_t c = 0; c < st.positions.size(); ++c) {
        const auto dc = d_candidates.col(static_cast<Eigen::Index>(c));
        if (t > 0 && st.prev_index[c] >= 0) {
          d_probs[t - 1][i][st.prev_index[c]] += dc(layout.prev_score_offset());
        }
        for (int k : st.positions[c].user) {
          d_user.col(k) += dc.segment(layout.user_states_offset(), d4);
        }
        for (int k : st.positions[c].system) {
          d_system.col(k) += dc.segment(layout.system_states_offset(), d4);
        }
      }
    }
    encoder_backward(model.store(), model.encoder(), tr.user, d_user,
                     d_utt.segment(layout.user_summary_offset(), d2), grads);
    encoder_backward(model.store(), model.encoder(), tr.system, d_system,
                     d_utt.segment(layout.system_summary_offset(), d2), grads);
  }
}

std::vector<std::map<std::string, Distribution>> track_distributions(
    const Dialogue &d, const TrackerModel &model, int *truncation_warnings) {
  std::vector<std::map<std::string, Distribution>> out;
  out.reserve(d.turns.size());
  TurnTrackState state = initial_track_state(model, model.slots_for(d.domain));
  int warnings = 0;
  for (const Turn &turn : d.turns) {
    state = track_turn(state, turn, model);
    warnings += state.truncation_warnings;
    std::map<std::string, Distribution> dists;
    for (const auto &[slot, track] : state.slots) dists.emplace(slot, track.distribution);
    out.push_back(std::move(dists));
  }
  if (truncation_warnings) *truncation_warnings = warnings;
  return out;
}

std::vector<DialogueState> track_dialogue(const Dialogue &d, const TrackerModel &model) {
  std::vector<DialogueState> out;
  TurnTrackState state = initial_track_state(model, model.slots_for(d.domain));
  for (const Turn &turn : d.turns) {
    state = track_turn(state, turn, model);
    DialogueState ds;
    for (const auto &[slot, track] : state.slots) ds.distributions.emplace(slot, track.distribution);
    ds.assignments = select_assignments(ds.distributions, model.threshold());
    ds.truncation_warnings = state.truncation_warnings;
    out.push_back(std::move(ds));
  }
  return out;
}

}  // namespace sdst
