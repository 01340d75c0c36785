#include "sdst/features.h"

#include <functional>
#include <set>

#include "sdst/errors.h"

namespace sdst {

ActInventory::ActInventory(std::vector<std::string> user,
                           std::vector<std::string> system)
    : user_(std::move(user)), system_(std::move(system)) {
  for (size_t i = 0; i < user_.size(); ++i) {
    user_index_.emplace(user_[i], static_cast<int>(i));
  }
  for (size_t i = 0; i < system_.size(); ++i) {
    system_index_.emplace(system_[i], static_cast<int>(i));
  }
}

int ActInventory::user_index(const std::string &act) const {
  auto it = user_index_.find(act);
  return it == user_index_.end() ? -1 : it->second;
}

int ActInventory::system_index(const std::string &act) const {
  auto it = system_index_.find(act);
  return it == system_index_.end() ? -1 : it->second;
}

ActInventory ActInventory::merge(const std::vector<ActInventory> &parts) {
  std::vector<std::string> user, system;
  std::set<std::string> seen_user, seen_system;
  for (const ActInventory &p : parts) {
    for (const auto &a : p.user_) {
      if (seen_user.insert(a).second) user.push_back(a);
    }
    for (const auto &a : p.system_) {
      if (seen_system.insert(a).second) system.push_back(a);
    }
  }
  return ActInventory(std::move(user), std::move(system));
}

namespace {

enum class ActShape { kFree, kSlot, kValue };

Vector act_bits(const std::vector<DialogueAct> &acts, int size,
                const std::function<int(const std::string &)> &index,
                ActShape shape, const std::string *slot, const std::string *value) {
  Vector v = Vector::Zero(size);
  for (const DialogueAct &a : acts) {
    bool match = false;
    switch (shape) {
      case ActShape::kFree:
        match = !a.slot;
        break;
      case ActShape::kSlot:
        match = a.slot && !a.value && *a.slot == *slot;
        break;
      case ActShape::kValue:
        match = a.slot && a.value && *a.slot == *slot && *a.value == *value;
        break;
    }
    if (!match) continue;
    const int i = index(a.act);
    if (i >= 0) v(i) = 1.0;
  }
  return v;
}

}  // namespace

ActVectors::ActVectors(const ActInventory &inventory,
                       const std::vector<DialogueAct> &user,
                       const std::vector<DialogueAct> &system)
    : inventory_(&inventory), user_(&user), system_(&system) {
  user_free_ = act_bits(user, inventory.user_size(),
                        [&](const std::string &a) { return inventory.user_index(a); },
                        ActShape::kFree, nullptr, nullptr);
  system_free_ = act_bits(system, inventory.system_size(),
                          [&](const std::string &a) { return inventory.system_index(a); },
                          ActShape::kFree, nullptr, nullptr);
}

Vector ActVectors::user_slot(const std::string &slot) const {
  return act_bits(*user_, inventory_->user_size(),
                  [&](const std::string &a) { return inventory_->user_index(a); },
                  ActShape::kSlot, &slot, nullptr);
}

Vector ActVectors::system_slot(const std::string &slot) const {
  return act_bits(*system_, inventory_->system_size(),
                  [&](const std::string &a) { return inventory_->system_index(a); },
                  ActShape::kSlot, &slot, nullptr);
}

Vector ActVectors::user_value(const std::string &slot, const std::string &value) const {
  return act_bits(*user_, inventory_->user_size(),
                  [&](const std::string &a) { return inventory_->user_index(a); },
                  ActShape::kValue, &slot, &value);
}

Vector ActVectors::system_value(const std::string &slot,
                                const std::string &value) const {
  return act_bits(*system_, inventory_->system_size(),
                  [&](const std::string &a) { return inventory_->system_index(a); },
                  ActShape::kValue, &slot, &value);
}

FeatureLayout::FeatureLayout(int hidden, int user, int system)
    : hidden_dim(hidden), user_acts(user), system_acts(system) {}

Vector featurize_utterances(const Vector &user_summary, const Vector &system_summary,
                            const ActVectors &acts) {
  const auto &au = acts.user_free();
  const auto &as = acts.system_free();
  Vector r(user_summary.size() + au.size() + system_summary.size() + as.size());
  r << user_summary, au, system_summary, as;
  return r;
}

Vector featurize_slot(const std::string &slot, const ActVectors &acts,
                      const Distribution &prev) {
  const Vector us = acts.user_slot(slot);
  const Vector ss = acts.system_slot(slot);
  Vector r(us.size() + ss.size() + 2);
  r << us, ss, prev.dontcare(), prev.null();
  return r;
}

CandidatePositions candidate_positions(const std::string &slot,
                                       const std::string &value,
                                       const DelexUtterance &user,
                                       const DelexUtterance &system) {
  return {positions_for(user, slot, value), positions_for(system, slot, value)};
}

Vector featurize_candidate(const std::string &slot, const std::string &value,
                           const CandidatePositions &positions,
                           const Matrix &user_states, const Matrix &system_states,
                           const ActVectors &acts, double prev_score) {
  const Vector uv = acts.user_value(slot, value);
  const Vector sv = acts.system_value(slot, value);
  Vector user_sum = Vector::Zero(user_states.rows());
  for (int k : positions.user) user_sum += user_states.col(k);
  Vector system_sum = Vector::Zero(system_states.rows());
  for (int k : positions.system) system_sum += system_states.col(k);
  Vector r(uv.size() + sv.size() + 1 + user_sum.size() + system_sum.size());
  r << uv, sv, prev_score, user_sum, system_sum;
  return r;
}

}  // namespace sdst
