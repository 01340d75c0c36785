#include "sdst/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "sdst/errors.h"

namespace sdst {
namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t mix(uint64_t a, uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

std::vector<std::string> words(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

std::vector<std::string> combine(const std::vector<std::string> &a,
                                 const std::vector<std::string> &b, int modulus, size_t limit) {
  std::vector<std::string> out;
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      if ((i + j) % modulus == 0 && out.size() < limit) out.push_back(a[i] + " " + b[j]);
    }
  }
  return out;
}

std::vector<std::string> numbers(int lo, int hi) {
  std::vector<std::string> out;
  for (int i = lo; i <= hi; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> dates() {
  std::vector<std::string> out = {"today", "tomorrow"};
  for (const char *d : {"monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
                        "sunday"}) {
    out.push_back(d);
  }
  for (const char *d : {"monday", "tuesday", "wednesday", "thursday", "friday"}) {
    out.push_back(std::string("next ") + d);
  }
  out.push_back("this weekend");
  out.push_back("next weekend");
  return out;
}

std::vector<std::string> times() {
  std::vector<std::string> out;
  for (int h = 5; h <= 11; ++h) {
    out.push_back(std::to_string(h) + " pm");
    out.push_back(std::to_string(h) + " 30 pm");
  }
  for (const char *t : {"11 am", "12 pm", "1 pm", "2 pm", "3 pm", "4 pm", "noon"}) {
    out.push_back(t);
  }
  return out;
}

const std::vector<std::string> kUserActs = {"inform",    "negate",   "affirm",
                                            "dontcare",  "thank_you", "goodbye"};
const std::vector<std::string> kSystemActs = {"greeting", "request", "confirm",
                                              "inform",   "reqmore", "notify_success"};

// Templates are space-separated tokens. {v}, {v1}, {v2}, {new} and {old} are
// slot values (annotated as spans); {p}, {p1}, {p2} are slot phrases.
const std::vector<std::string> kGreeting = {
    "hello , welcome . how can i help you ?", "hi , what can i do for you ?",
    "hello , how may i help you today ?", "good day , how can i help ?",
    "hi there , what are you looking for ?"};
const std::vector<std::string> kRequest = {
    "what {p} would you like ?", "which {p} do you prefer ?", "do you have a {p} in mind ?",
    "could you tell me the {p} ?", "what about the {p} ?"};
const std::vector<std::string> kConfirm = {
    "did you say {v} for the {p} ?", "so the {p} is {v} , right ?", "just to confirm , {v} ?",
    "you want {v} , is that correct ?", "{v} for the {p} , correct ?"};
const std::vector<std::string> kOffer = {
    "how about {v} for the {p} ?", "i can suggest {v} .", "would {v} work for the {p} ?",
    "there is an option with {v} .", "what about {v} ?"};
const std::vector<std::string> kReqmore = {
    "ok , anything else ?", "got it . what else ?", "sure , anything else i should know ?",
    "noted . anything else ?", "alright , what else can i do ?"};
const std::vector<std::string> kSuccess = {
    "your booking is confirmed .", "all set , your reservation is done .",
    "done , it is booked .", "great , you are all booked .", "i have made the booking for you ."};

const std::vector<std::string> kInformOne = {
    "i want {v} for the {p}", "{v} please", "the {p} should be {v}", "i would like {v}",
    "can we do {v} for the {p}", "let us go with {v}"};
const std::vector<std::string> kInformTwo = {
    "i want {v1} for the {p1} and {v2} for the {p2}", "{v1} and {v2} please",
    "the {p1} is {v1} and the {p2} is {v2}", "i would like {v1} with {v2}",
    "{v1} for the {p1} , {v2} for the {p2}"};
const std::vector<std::string> kDontcare = {
    "i do not care about the {p}", "any {p} is fine", "the {p} does not matter",
    "whatever {p} works", "no preference on the {p}"};
const std::vector<std::string> kAffirm = {"yes", "yes please", "that is right", "correct",
                                          "sounds good"};
// Rejects the system's value and restates the wanted one.
const std::vector<std::string> kNegateRestate = {
    "no , {new}", "no , i want {new}", "no , the {p} should be {new}", "no , i said {new}",
    "not quite , {new} please"};
// Wanted value first, rejected value last.
const std::vector<std::string> kNegateInstead = {
    "{new} instead of {old}", "i want {new} not {old}", "make it {new} rather than {old}",
    "no , {new} , not {old}", "let us do {new} instead of {old}"};
// Rejects a value without restating the wanted one.
const std::vector<std::string> kNegateOnly = {
    "not {old}", "no , not {old}", "i do not want {old}", "{old} is wrong",
    "no , {old} is not what i said"};
const std::vector<std::string> kChange = {
    "actually , change the {p} to {new}", "sorry , i meant {new}",
    "actually i want {new} for the {p}", "can you change it to {new} ?",
    "let us switch the {p} to {new}"};
const std::vector<std::string> kChangeInstead = {
    "actually , {new} instead of {old}", "actually make it {new} not {old}",
    "sorry , {new} rather than {old}", "change it to {new} instead of {old}",
    "i prefer {new} over {old} now"};
const std::vector<std::string> kBye = {"thank you , goodbye", "thanks , bye", "great , thank you",
                                       "that is all , thanks", "perfect , goodbye"};

struct Utterance {
  std::vector<std::string> tokens;
  std::vector<SlotSpan> spans;
};

struct Filler {
  std::map<std::string, std::pair<std::string, std::string>> values;  // name -> (slot, value)
  std::map<std::string, std::string> phrases;
};

void render(const std::string &tmpl, const Filler &f, Utterance *u) {
  for (const std::string &w : words(tmpl)) {
    if (w.size() > 2 && w.front() == '{' && w.back() == '}') {
      const std::string name = w.substr(1, w.size() - 2);
      auto vit = f.values.find(name);
      if (vit != f.values.end()) {
        const int start = static_cast<int>(u->tokens.size());
        for (auto &t : tokenize(vit->second.second)) u->tokens.push_back(t);
        u->spans.push_back({vit->second.first, vit->second.second, start,
                            static_cast<int>(u->tokens.size())});
        continue;
      }
      auto pit = f.phrases.find(name);
      if (pit == f.phrases.end()) throw ConfigError("template placeholder " + w + " unfilled");
      for (auto &t : words(pit->second)) u->tokens.push_back(t);
      continue;
    }
    u->tokens.push_back(w);
  }
}

class Simulator {
 public:
  Simulator(const DomainSchema &schema, const std::map<std::string, std::vector<std::string>> &pools,
            const GenConfig &cfg, uint64_t seed)
      : schema_(schema), pools_(pools), cfg_(cfg), rng_(seed) {}

  Dialogue run(const std::string &id);

 private:
  enum class SysAct { kNone, kGreeting, kRequest, kConfirm, kOffer, kReqmore, kSuccess };

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool chance(double p) { return uniform() < p; }
  size_t index(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }
  const std::string &pick(const std::vector<std::string> &v) { return v[index(v.size())]; }
  std::string phrase(const std::string &slot) const {
    auto it = schema_.slot_phrases.find(slot);
    return it == schema_.slot_phrases.end() ? slot : it->second;
  }
  const std::vector<std::string> &pool(const std::string &slot) const {
    auto it = pools_.find(slot);
    if (it == pools_.end() || it->second.empty()) {
      throw ConfigError("no values available for slot '" + slot + "'");
    }
    return it->second;
  }
  std::string other_value(const std::string &slot, const std::string &avoid) {
    const auto &p = pool(slot);
    if (p.size() < 2) return avoid;
    for (;;) {
      const std::string &v = pick(p);
      if (v != avoid) return v;
    }
  }

  // Renders a user inform of up to two agenda items and updates the goal state.
  void inform_items(size_t count, Utterance *u, std::vector<DialogueAct> *acts);
  void inform_one(const std::string &slot, Utterance *u, std::vector<DialogueAct> *acts);
  void separator(Utterance *u) {
    if (!u->tokens.empty()) u->tokens.push_back(",");
  }

  const DomainSchema &schema_;
  const std::map<std::string, std::vector<std::string>> &pools_;
  const GenConfig &cfg_;
  std::mt19937_64 rng_;
  std::vector<std::string> agenda_;
  std::map<std::string, StateValue> goal_;
  SlotStates state_;
  std::vector<std::string> last_informed_;
};

void Simulator::inform_one(const std::string &slot, Utterance *u,
                           std::vector<DialogueAct> *acts) {
  const StateValue &g = goal_.at(slot);
  Filler f;
  f.phrases["p"] = phrase(slot);
  if (g.is_value()) {
    f.values["v"] = {slot, g.text()};
    render(pick(kInformOne), f, u);
    acts->push_back({"inform", slot, g.text()});
    last_informed_.push_back(slot);
  } else {
    render(pick(kDontcare), f, u);
    acts->push_back({"dontcare", slot, std::nullopt});
  }
  state_[slot] = g;
}

void Simulator::inform_items(size_t count, Utterance *u, std::vector<DialogueAct> *acts) {
  count = std::min(count, agenda_.size());
  if (count == 2 && goal_.at(agenda_[0]).is_value() && goal_.at(agenda_[1]).is_value()) {
    const std::string s1 = agenda_[0], s2 = agenda_[1];
    Filler f;
    f.values["v1"] = {s1, goal_.at(s1).text()};
    f.values["v2"] = {s2, goal_.at(s2).text()};
    f.phrases["p1"] = phrase(s1);
    f.phrases["p2"] = phrase(s2);
    render(pick(kInformTwo), f, u);
    for (const auto &s : {s1, s2}) {
      acts->push_back({"inform", s, goal_.at(s).text()});
      state_[s] = goal_.at(s);
      last_informed_.push_back(s);
    }
    agenda_.erase(agenda_.begin(), agenda_.begin() + 2);
    return;
  }
  for (size_t i = 0; i < count; ++i) {
    if (i > 0) u->tokens.push_back("and");
    inform_one(agenda_.front(), u, acts);
    agenda_.erase(agenda_.begin());
  }
}

Dialogue Simulator::run(const std::string &id) {
  Dialogue d;
  d.id = id;
  d.domain = schema_.domain;

  std::vector<std::string> slots = schema_.slots;
  std::shuffle(slots.begin(), slots.end(), rng_);
  const size_t max_goal = std::min<size_t>(5, slots.size());
  const size_t n_goal = std::min<size_t>(2, max_goal) + index(max_goal - std::min<size_t>(2, max_goal) + 1);
  for (size_t i = 0; i < n_goal; ++i) {
    const std::string &s = slots[i];
    goal_[s] = chance(cfg_.dontcare_prob) ? StateValue::dontcare() : StateValue::value(pick(pool(s)));
    agenda_.push_back(s);
  }

  for (int t = 0; t < cfg_.max_turns; ++t) {
    Turn turn;
    Utterance sys, user;
    SysAct act = SysAct::kNone;
    std::string act_slot, shown;

    if (t == 0) {
      if (chance(0.5)) act = SysAct::kGreeting;
    } else if (agenda_.empty()) {
      act = SysAct::kSuccess;
    } else {
      const double r = uniform();
      if (!last_informed_.empty() && r < cfg_.confirm_prob) {
        act = SysAct::kConfirm;
      } else if (r < cfg_.confirm_prob + cfg_.offer_prob && goal_.at(agenda_.front()).is_value()) {
        act = SysAct::kOffer;
      } else if (chance(0.6)) {
        act = SysAct::kRequest;
      } else {
        act = SysAct::kReqmore;
      }
    }

    Filler sf;
    switch (act) {
      case SysAct::kNone:
        break;
      case SysAct::kGreeting:
        render(pick(kGreeting), sf, &sys);
        turn.system_acts.push_back({"greeting", std::nullopt, std::nullopt});
        break;
      case SysAct::kRequest:
        act_slot = agenda_.front();
        sf.phrases["p"] = phrase(act_slot);
        render(pick(kRequest), sf, &sys);
        turn.system_acts.push_back({"request", act_slot, std::nullopt});
        break;
      case SysAct::kConfirm: {
        act_slot = last_informed_[index(last_informed_.size())];
        const std::string truth = state_.at(act_slot).text();
        shown = chance(cfg_.confirm_error_prob) ? other_value(act_slot, truth) : truth;
        sf.values["v"] = {act_slot, shown};
        sf.phrases["p"] = phrase(act_slot);
        render(pick(kConfirm), sf, &sys);
        turn.system_acts.push_back({"confirm", act_slot, shown});
        break;
      }
      case SysAct::kOffer:
        act_slot = agenda_.front();
        shown = chance(0.5) ? goal_.at(act_slot).text() : other_value(act_slot, goal_.at(act_slot).text());
        sf.values["v"] = {act_slot, shown};
        sf.phrases["p"] = phrase(act_slot);
        render(pick(kOffer), sf, &sys);
        turn.system_acts.push_back({"inform", act_slot, shown});
        break;
      case SysAct::kReqmore:
        render(pick(kReqmore), sf, &sys);
        turn.system_acts.push_back({"reqmore", std::nullopt, std::nullopt});
        break;
      case SysAct::kSuccess:
        render(pick(kSuccess), sf, &sys);
        turn.system_acts.push_back({"notify_success", std::nullopt, std::nullopt});
        break;
    }

    last_informed_.clear();
    bool done = false;
    auto more = [&] { return chance(0.4) ? 2u : 1u; };
    switch (act) {
      case SysAct::kSuccess:
        render(pick(kBye), Filler{}, &user);
        turn.user_acts.push_back({"thank_you", std::nullopt, std::nullopt});
        turn.user_acts.push_back({"goodbye", std::nullopt, std::nullopt});
        done = true;
        break;
      case SysAct::kConfirm: {
        const std::string truth = state_.at(act_slot).text();
        if (shown == truth) {
          render(pick(kAffirm), Filler{}, &user);
          turn.user_acts.push_back({"affirm", std::nullopt, std::nullopt});
          if (!agenda_.empty() && chance(0.5)) {
            separator(&user);
            inform_items(1, &user, &turn.user_acts);
          }
          break;
        }
        Filler f;
        f.values["new"] = {act_slot, truth};
        f.values["old"] = {act_slot, shown};
        f.phrases["p"] = phrase(act_slot);
        const double r = uniform();
        if (r < 1.0 / 3.0) {
          f.values.erase("old");
          render(pick(kNegateRestate), f, &user);
          turn.user_acts.push_back({"negate", std::nullopt, std::nullopt});
          turn.user_acts.push_back({"inform", act_slot, truth});
        } else if (r < 2.0 / 3.0) {
          render(pick(kNegateInstead), f, &user);
          turn.user_acts.push_back({"negate", act_slot, shown});
          turn.user_acts.push_back({"inform", act_slot, truth});
        } else {
          f.values.erase("new");
          render(pick(kNegateOnly), f, &user);
          turn.user_acts.push_back({"negate", act_slot, shown});
        }
        break;
      }
      case SysAct::kOffer: {
        const std::string wanted = goal_.at(act_slot).text();
        agenda_.erase(agenda_.begin());
        state_[act_slot] = goal_.at(act_slot);
        if (shown == wanted) {
          render(pick(kAffirm), Filler{}, &user);
          turn.user_acts.push_back({"affirm", std::nullopt, std::nullopt});
          break;
        }
        Filler f;
        f.values["new"] = {act_slot, wanted};
        f.values["old"] = {act_slot, shown};
        f.phrases["p"] = phrase(act_slot);
        if (chance(0.5)) {
          f.values.erase("old");
          render(pick(kNegateRestate), f, &user);
          turn.user_acts.push_back({"negate", std::nullopt, std::nullopt});
        } else {
          render(pick(kNegateInstead), f, &user);
          turn.user_acts.push_back({"negate", act_slot, shown});
        }
        turn.user_acts.push_back({"inform", act_slot, wanted});
        last_informed_.push_back(act_slot);
        break;
      }
      case SysAct::kRequest:
        inform_items(more(), &user, &turn.user_acts);
        break;
      case SysAct::kNone:
      case SysAct::kGreeting:
      case SysAct::kReqmore: {
        std::vector<std::string> filled;
        for (const auto &[s, v] : state_) {
          if (v.is_value()) filled.push_back(s);
        }
        if (!filled.empty() && chance(cfg_.negate_prob)) {
          const std::string s = filled[index(filled.size())];
          const std::string old = state_.at(s).text();
          const std::string fresh = other_value(s, old);
          if (fresh != old) {
            Filler f;
            f.values["new"] = {s, fresh};
            f.values["old"] = {s, old};
            f.phrases["p"] = phrase(s);
            if (chance(0.5)) {
              f.values.erase("old");
              render(pick(kChange), f, &user);
            } else {
              render(pick(kChangeInstead), f, &user);
              turn.user_acts.push_back({"negate", s, old});
            }
            turn.user_acts.push_back({"inform", s, fresh});
            goal_[s] = StateValue::value(fresh);
            state_[s] = goal_[s];
            last_informed_.push_back(s);
            break;
          }
        }
        if (agenda_.empty()) {
          render(pick(kBye), Filler{}, &user);
          turn.user_acts.push_back({"thank_you", std::nullopt, std::nullopt});
          turn.user_acts.push_back({"goodbye", std::nullopt, std::nullopt});
          done = true;
        } else {
          inform_items(more(), &user, &turn.user_acts);
        }
        break;
      }
    }

    turn.system_tokens = std::move(sys.tokens);
    turn.system_spans = std::move(sys.spans);
    turn.user_tokens = std::move(user.tokens);
    turn.user_spans = std::move(user.spans);
    turn.gold_state = state_;
    d.turns.push_back(std::move(turn));
    if (done) break;
  }
  return d;
}

std::set<std::pair<std::string, std::string>> seen_pairs(const std::vector<Dialogue> &split) {
  std::set<std::pair<std::string, std::string>> out;
  for (const Dialogue &d : split) {
    for (const Turn &t : d.turns) {
      for (const auto &[slot, v] : t.gold_state) {
        if (v.is_value()) out.insert({slot, v.text()});
      }
      for (const SlotSpan &s : t.user_spans) out.insert({s.slot, s.value});
    }
  }
  return out;
}

std::vector<Dialogue> generate_split(const DomainSchema &schema,
                                     const std::map<std::string, std::vector<std::string>> &pools,
                                     const GenConfig &cfg, const std::string &split, int count,
                                     uint64_t stream) {
  std::vector<Dialogue> out;
  for (int i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%s-%05d", schema.domain.c_str(), split.c_str(), i);
    Dialogue d = generate_dialogue(schema, pools, cfg, mix(stream, static_cast<uint64_t>(i)), id);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

void GenConfig::validate() const {
  auto prob = [](double p, const char *name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError(std::string(name) + " must be in [0, 1], got " + std::to_string(p));
    }
  };
  if (n_train <= 0 || n_dev < 0 || n_test < 0) {
    throw ConfigError("split sizes must be non-negative with at least one train dialogue");
  }
  if (!(target_oov >= 0.0 && target_oov < 1.0)) {
    throw ConfigError("target OOV rate must be in [0, 1), got " + std::to_string(target_oov));
  }
  if (!(oov_tolerance > 0.0)) throw ConfigError("oov_tolerance must be positive");
  if (max_turns <= 0) throw ConfigError("max_turns must be positive");
  prob(dontcare_prob, "dontcare_prob");
  prob(negate_prob, "negate_prob");
  prob(confirm_prob, "confirm_prob");
  prob(confirm_error_prob, "confirm_error_prob");
  prob(offer_prob, "offer_prob");
  if (confirm_prob + offer_prob > 1.0) throw ConfigError("confirm_prob + offer_prob exceeds 1");
}

GenConfig gen_config_from(const KeyValues &kv) {
  kv.require_known({"n_train", "n_dev", "n_test", "target_oov", "oov_tolerance", "max_turns",
                    "dontcare_prob", "negate_prob", "confirm_prob", "confirm_error_prob",
                    "offer_prob", "seed"});
  GenConfig c;
  c.n_train = kv.get_int("n_train", c.n_train);
  c.n_dev = kv.get_int("n_dev", c.n_dev);
  c.n_test = kv.get_int("n_test", c.n_test);
  c.target_oov = kv.get_double("target_oov", c.target_oov);
  c.oov_tolerance = kv.get_double("oov_tolerance", c.oov_tolerance);
  c.max_turns = kv.get_int("max_turns", c.max_turns);
  c.dontcare_prob = kv.get_double("dontcare_prob", c.dontcare_prob);
  c.negate_prob = kv.get_double("negate_prob", c.negate_prob);
  c.confirm_prob = kv.get_double("confirm_prob", c.confirm_prob);
  c.confirm_error_prob = kv.get_double("confirm_error_prob", c.confirm_error_prob);
  c.offer_prob = kv.get_double("offer_prob", c.offer_prob);
  c.seed = kv.get_uint64("seed", c.seed);
  c.validate();
  return c;
}

std::vector<std::string> builtin_schema_names() { return {"movie", "restaurant"}; }

DomainSchema builtin_schema(const std::string &name) {
  DomainSchema s;
  s.domain = name;
  s.user_act_inventory = kUserActs;
  s.system_act_inventory = kSystemActs;
  if (name == "restaurant") {
    s.slots = {"pricerange", "area", "restaurant", "food", "num_people", "meal", "date", "time"};
    s.value_inventory["pricerange"] = {"cheap",      "moderate",  "expensive", "affordable",
                                       "upscale",    "budget",    "mid range", "luxury",
                                       "reasonable", "high end"};
    s.value_inventory["area"] = {"north",     "south",     "east",         "west",
                                 "centre",    "downtown",  "midtown",      "uptown",
                                 "riverside", "old town",  "harbour front", "university district",
                                 "west end",  "east side", "chinatown",    "suburbs"};
    s.value_inventory["restaurant"] = combine(
        {"golden", "blue", "red", "silver", "green", "little", "royal", "old", "happy", "lucky",
         "grand", "rustic", "urban", "sunny", "quiet", "wild"},
        {"dragon", "door", "lantern", "garden", "spoon", "kitchen", "table", "bistro", "oven",
         "harbor", "orchard", "pepper"},
        3, 64);
    s.value_inventory["food"] = {
        "thai",      "chinese",    "indian",    "italian",    "french",     "mexican",
        "japanese",  "korean",     "vietnamese", "greek",     "spanish",    "turkish",
        "lebanese",  "ethiopian",  "moroccan",  "brazilian",  "peruvian",   "german",
        "british",   "american",   "cuban",     "caribbean",  "malaysian",  "indonesian",
        "filipino",  "persian",    "russian",   "polish",     "portuguese", "swedish",
        "irish",     "nepalese",   "tibetan",   "mongolian",  "argentinian", "jamaican",
        "hawaiian",  "cajun",      "seafood",   "vegetarian", "barbecue",   "fusion"};
    s.value_inventory["num_people"] = numbers(1, 12);
    s.value_inventory["meal"] = {"breakfast", "brunch",      "lunch",      "dinner",
                                 "supper",    "afternoon tea", "late dinner", "early lunch"};
    s.value_inventory["date"] = dates();
    s.value_inventory["time"] = times();
    s.slot_phrases = {{"pricerange", "price range"}, {"area", "area"},
                      {"restaurant", "restaurant"},  {"food", "cuisine"},
                      {"num_people", "number of people"}, {"meal", "meal"},
                      {"date", "date"},              {"time", "time"}};
  } else if (name == "movie") {
    s.slots = {"movie", "theatre", "num_tickets", "date", "time"};
    s.value_inventory["movie"] = combine(
        {"dark", "last", "silent", "frozen", "hidden", "broken", "eternal", "crimson", "lost",
         "final", "midnight", "iron"},
        {"river", "kingdom", "empire", "signal", "horizon", "garden", "voyage", "protocol",
         "shadow", "legacy"},
        2, 60);
    s.value_inventory["theatre"] = combine(
        {"regal", "cinemark", "amc", "landmark", "alamo", "majestic", "paramount", "orpheum",
         "roxy", "rialto", "odeon", "vue"},
        {"plaza", "center", "downtown", "hills", "park"}, 2, 30);
    s.value_inventory["num_tickets"] = numbers(1, 10);
    s.value_inventory["date"] = dates();
    s.value_inventory["time"] = times();
    s.slot_phrases = {{"movie", "movie"},
                      {"theatre", "theatre"},
                      {"num_tickets", "number of tickets"},
                      {"date", "date"},
                      {"time", "time"}};
  } else {
    throw ConfigError("unknown built-in schema '" + name + "' (restaurant or movie)");
  }
  return s;
}

DomainSchema resolve_schema(const std::string &spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return builtin_schema(spec.substr(prefix.size()));
  return load_schema(spec);
}

Dialogue generate_dialogue(const DomainSchema &schema,
                           const std::map<std::string, std::vector<std::string>> &pools,
                           const GenConfig &cfg, uint64_t seed, const std::string &id) {
  Simulator sim(schema, pools, cfg, seed);
  Dialogue d = sim.run(id);
  const auto violations = validate_dialogue(d, schema);
  if (!violations.empty()) {
    throw DataError("generated dialogue " + id + " is invalid at turn " +
                    std::to_string(violations.front().turn) + ": " + violations.front().message);
  }
  return d;
}

Corpus generate_corpus(const DomainSchema &schema, const GenConfig &cfg, GenReport *report) {
  cfg.validate();
  for (const auto &slot : schema.slots) {
    auto it = schema.value_inventory.find(slot);
    if (it == schema.value_inventory.end() || it->second.size() < 2) {
      throw ConfigError("schema '" + schema.domain + "' needs at least two values for slot '" +
                        slot + "'");
    }
  }
  std::mt19937_64 rng(mix(cfg.seed, 0x6f6f76));

  // Held-out values per slot: m = round(t * n), leaving at least one value for
  // training.
  std::map<std::string, std::vector<std::string>> held_out;
  ValuePools pools;
  int total_held = 0;
  for (const auto &slot : schema.slots) {
    std::vector<std::string> values = schema.value_inventory.at(slot);
    std::shuffle(values.begin(), values.end(), rng);
    const int n = static_cast<int>(values.size());
    const int m = std::min(n - 1, static_cast<int>(std::lround(cfg.target_oov * n)));
    held_out[slot].assign(values.begin(), values.begin() + m);
    pools.train[slot].assign(values.begin() + m, values.end());
    total_held += m;
  }
  if (cfg.target_oov > 0.0 && total_held == 0) {
    throw ConfigError("target OOV rate " + std::to_string(cfg.target_oov) +
                      " is unreachable: value inventories are too small to hold values out");
  }

  Corpus c;
  c.schema = schema;
  c.train = generate_split(schema, pools.train, cfg, "train", cfg.n_train, mix(cfg.seed, 1));
  const auto seen = seen_pairs(c.train);

  // In-vocabulary share q = m (1 - t) / t, scaled by `ratio` between attempts.
  double ratio = 1.0;
  const int max_attempts = 20;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::mt19937_64 pool_rng(mix(cfg.seed, 100 + attempt));
    pools.eval.clear();
    for (const auto &slot : schema.slots) {
      std::vector<std::string> known;
      for (const auto &v : pools.train.at(slot)) {
        if (seen.count({slot, v})) known.push_back(v);
      }
      std::shuffle(known.begin(), known.end(), pool_rng);
      const int m = static_cast<int>(held_out.at(slot).size());
      int q = static_cast<int>(known.size());
      if (cfg.target_oov > 0.0) {
        q = static_cast<int>(std::lround(ratio * m * (1.0 - cfg.target_oov) / cfg.target_oov));
        q = std::clamp(q, m == 0 ? 1 : 0, static_cast<int>(known.size()));
      }
      auto &p = pools.eval[slot];
      p = held_out.at(slot);
      p.insert(p.end(), known.begin(), known.begin() + q);
      if (p.size() < 2) p = pools.train.at(slot);
    }
    const uint64_t stream = mix(cfg.seed, 1000 + attempt);
    c.dev = generate_split(schema, pools.eval, cfg, "dev", cfg.n_dev, mix(stream, 2));
    c.test = generate_split(schema, pools.eval, cfg, "test", cfg.n_test, mix(stream, 3));
    const double rate = c.test.empty() ? cfg.target_oov : compute_oov_rate(c.train, c.test);
    if (report) {
      report->test_oov = c.test.empty() ? 0.0 : rate;
      report->attempts = attempt;
    }
    if (std::abs(rate - cfg.target_oov) <= cfg.oov_tolerance) return c;
    // Too many unseen values: widen the in-vocabulary share, and vice versa.
    ratio *= rate > cfg.target_oov ? 1.25 : 0.8;
  }
  throw ConfigError("could not reach test OOV rate " + std::to_string(cfg.target_oov) +
                    " within " + std::to_string(cfg.oov_tolerance) + " after " +
                    std::to_string(max_attempts) + " attempts");
}

}  // namespace sdst
