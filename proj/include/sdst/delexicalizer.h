#ifndef SDST_DELEXICALIZER_H_
#define SDST_DELEXICALIZER_H_

#include <string>
#include <vector>

#include "sdst/dialogue.h"

namespace sdst {

struct DelexOccurrence {
  int position = 0;  // index in the delexicalized sequence
  std::string slot;
  std::string value;  // canonical value that was replaced

  bool operator==(const DelexOccurrence &) const = default;
};

struct DelexUtterance {
  std::vector<std::string> tokens;
  std::vector<DelexOccurrence> occurrences;  // positions strictly increasing
};

// Replaces every span by a single delex(slot) token. Slot names appearing as
// ordinary words are left alone. Throws DataError on overlapping or
// out-of-range spans.
DelexUtterance delexicalize(const std::vector<std::string> &tokens,
                            const std::vector<SlotSpan> &spans);

// Delexicalized positions where `value` of `slot` occurred.
std::vector<int> positions_for(const DelexUtterance &u, const std::string &slot,
                               const std::string &value);

}  // namespace sdst

#endif  // SDST_DELEXICALIZER_H_
