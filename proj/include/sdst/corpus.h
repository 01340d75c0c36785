#ifndef SDST_CORPUS_H_
#define SDST_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdst/dialogue.h"

namespace sdst {

inline constexpr int kCorpusFormatVersion = 1;

// Serialized marker for a dontcare state value.
inline constexpr const char *kDontcareMarker = "__dontcare__";

struct Corpus {
  DomainSchema schema;
  std::vector<Dialogue> train;
  std::vector<Dialogue> dev;
  std::vector<Dialogue> test;

  const std::vector<Dialogue> &split(const std::string &name) const;
};

// Corpus file: a header line followed by one dialogue object per line. Each
// dialogue object carries a "split" key so one file holds all three splits.
Corpus load_corpus(const std::filesystem::path &path);
void write_corpus(const Corpus &c, const std::filesystem::path &path);
std::string corpus_to_string(const Corpus &c);
Corpus corpus_from_string(const std::string &text, const std::string &origin);

// Schema files (JSON) used by the generator and the converters.
DomainSchema load_schema(const std::filesystem::path &path);
void write_schema(const DomainSchema &schema, const std::filesystem::path &path);

// Fraction of distinct (slot, value) pairs in test gold states never seen in
// train gold states or train user spans.
double compute_oov_rate(const std::vector<Dialogue> &train,
                        const std::vector<Dialogue> &test);

inline constexpr const char *kUnkToken = "<unk>";
inline constexpr const char *kBoundaryToken = "<s>";

// "delex(time)" for slot "time".
std::string delex_token(const std::string &slot);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Full token list in id order; ids 0 and 1 must be <unk> and <s>.
  explicit Vocabulary(const std::vector<std::string> &tokens_in_id_order);

  int size() const { return static_cast<int>(tokens_.size()); }
  int unk_id() const { return 0; }
  int boundary_id() const { return 1; }
  int lookup(const std::string &token) const;
  bool contains(const std::string &token) const;
  const std::string &token(int id) const { return tokens_.at(id); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  bool operator==(const Vocabulary &o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Builds a vocabulary over delexicalized train tokens (both sides) with
// frequency >= min_count. `slots` lists every slot needing a delex token.
Vocabulary build_vocab(const std::vector<const std::vector<Dialogue> *> &train,
                       const std::vector<std::string> &slots, int min_count);
Vocabulary build_vocab(const std::vector<Dialogue> &train,
                       const std::vector<std::string> &slots, int min_count);

struct CorpusStats {
  int train_dialogues = 0;
  int dev_dialogues = 0;
  int test_dialogues = 0;
  double mean_turns = 0.0;
  int max_turns = 0;
  double oov_rate = 0.0;  // test vs train; 0 when the test split is empty
  std::map<std::string, int> values_per_slot;  // distinct gold values
};

CorpusStats corpus_stats(const Corpus &c);
std::string format_stats(const CorpusStats &s);

}  // namespace sdst

#endif  // SDST_CORPUS_H_
