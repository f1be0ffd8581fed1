#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kogito {

enum class PosTag { kNoun, kVerb, kAdj, kDet, kPron, kAdp, kAdv, kNum, kPunct, kOther };

std::string_view to_string(PosTag tag);

struct TaggedToken {
  std::string surface;
  PosTag tag;
};

// Splits on whitespace and peels leading/trailing punctuation into separate
// tokens. Word-internal punctuation ("don't", "e-mail", "3.5") is kept.
std::vector<std::string> split_tokens(std::string_view sentence);

// Lexicon tagger over the coarse tag set: an embedded ~15k-word lexicon,
// suffix rules for unknown words, and a handful of left-context rules that
// resolve noun/verb ambiguity.
class LexiconTagger {
 public:
  // Shared instance backed by the embedded lexicon.
  static const LexiconTagger& instance();

  // `tsv` holds "word<TAB>TAG[,TAG...]" lines; '#' starts a comment.
  static LexiconTagger from_tsv(std::string_view tsv);

  std::vector<TaggedToken> tag(std::string_view sentence) const;
  std::vector<TaggedToken> tag_tokens(const std::vector<std::string>& tokens) const;

  // Candidate tags for a word out of context, most likely first.
  std::vector<PosTag> candidates(std::string_view word) const;
  bool in_lexicon(std::string_view word) const;
  bool can_be(std::string_view word, PosTag tag) const;
  std::size_t lexicon_size() const { return lexicon_.size(); }

  // Crude verb lemma: irregular table, then suffix stripping checked against
  // the lexicon ("becomes" -> "become", "stopped" -> "stop").
  std::string verb_lemma(std::string_view word) const;

 private:
  std::unordered_map<std::string, std::vector<PosTag>> lexicon_;
};

}  // namespace kogito
