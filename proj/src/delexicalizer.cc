#include "sdst/delexicalizer.h"

#include <algorithm>

#include "sdst/corpus.h"
#include "sdst/errors.h"

namespace sdst {

DelexUtterance delexicalize(const std::vector<std::string> &tokens,
                            const std::vector<SlotSpan> &spans) {
  std::vector<const SlotSpan *> ordered;
  ordered.reserve(spans.size());
  for (const SlotSpan &s : spans) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(),
            [](const SlotSpan *a, const SlotSpan *b) { return a->start < b->start; });

  const int n = static_cast<int>(tokens.size());
  DelexUtterance out;
  out.tokens.reserve(tokens.size());
  int next = 0;
  for (const SlotSpan *s : ordered) {
    if (s->start < 0 || s->start >= s->end || s->end > n) {
      throw DataError("span (" + s->slot + ", " + std::to_string(s->start) +
                      ", " + std::to_string(s->end) + ") out of range for " +
                      std::to_string(n) + " tokens");
    }
    if (s->start < next) {
      throw DataError("overlapping spans at token " + std::to_string(s->start));
    }
    out.tokens.insert(out.tokens.end(), tokens.begin() + next,
                      tokens.begin() + s->start);
    out.occurrences.push_back(
        {static_cast<int>(out.tokens.size()), s->slot, s->value});
    out.tokens.push_back(delex_token(s->slot));
    next = s->end;
  }
  out.tokens.insert(out.tokens.end(), tokens.begin() + next, tokens.end());
  return out;
}

std::vector<int> positions_for(const DelexUtterance &u, const std::string &slot,
                               const std::string &value) {
  std::vector<int> out;
  for (const DelexOccurrence &o : u.occurrences) {
    if (o.slot == slot && o.value == value) out.push_back(o.position);
  }
  return out;
}

}  // namespace sdst
