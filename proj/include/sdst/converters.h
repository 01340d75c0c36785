#ifndef SDST_CONVERTERS_H_
#define SDST_CONVERTERS_H_

#include <filesystem>
#include <string>

#include "sdst/corpus.h"

namespace sdst {

enum class SourceFormat { kDstc2, kSimDialogue };

SourceFormat parse_source_format(const std::string &text);

// Simulated-dialogue layout: DIR/{train,dev,test}.json, each a JSON array of
// {dialogue_id, turns:[{system_utterance:{tokens, slots:[{slot, start,
// exclusive_end}]}, system_acts:[{type, slot?, value?}], user_utterance,
// user_acts, dialogue_state:[{slot, value}]}]}. Missing split files give
// empty splits.
Corpus convert_simdialogue(const std::filesystem::path &dir, const std::string &domain);

// DSTC2 layout: DIR/{train,dev,test}/**/ session directories holding log.json
// and label.json. System acts come from the log, user acts and goal labels
// from the labels; user spans are found by matching value tokens in the
// transcription.
Corpus convert_dstc2(const std::filesystem::path &dir, const std::string &domain);

// Empty `domain` uses the lowercased directory name.
Corpus convert_corpus(SourceFormat format, const std::filesystem::path &dir,
                      const std::string &domain = "");

}  // namespace sdst

#endif  // SDST_CONVERTERS_H_
