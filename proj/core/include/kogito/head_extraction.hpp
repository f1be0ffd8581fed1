#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kogito/knowledge.hpp"

namespace kogito {

enum class HeadForm { kSentence, kNounPhrase, kVerbPhrase };

std::string_view to_string(HeadForm form);
// Accepts "sentence", "noun_phrase"/"np", "verb_phrase"/"vp".
HeadForm parse_head_form(std::string_view name);

struct ExtractedHead {
  KnowledgeHead head;
  HeadForm form;
  std::size_t source_sentence_index;
};

struct SegmentOptions {
  // Treat "A." (one capital letter plus period) as an initial, not a
  // sentence end.
  bool guard_single_letters = true;
  // Extra abbreviations (without the trailing period) on top of the
  // built-in list.
  std::vector<std::string> extra_abbreviations;
};

// The built-in abbreviation guard list ("Dr", "Mr", "e.g", ...).
const std::vector<std::string>& default_abbreviations();

// Splits after '.', '!' or '?' (plus closing quotes/brackets) when the next
// non-space character is uppercase or a digit, and at blank lines. Segments
// are trimmed; empty input yields no segments.
std::vector<std::string> segment_sentences(std::string_view text,
                                           const SegmentOptions& options = {});

using ExtractorSet = std::set<HeadForm>;

inline ExtractorSet all_extractors() {
  return {HeadForm::kSentence, HeadForm::kNounPhrase, HeadForm::kVerbPhrase};
}

// Dedup key: lowercase, collapsed whitespace, leading determiners removed.
std::string head_dedup_key(std::string_view head);

// Per sentence, in order: the sentence itself (terminal punctuation
// removed), noun-phrase heads, verb-phrase heads. Noun-phrase heads are the
// noun compound of each DET? ADJ* NOUN+ chunk plus, for multi-noun
// compounds, each noun on its own. Verb-phrase heads pair the verb lemma
// with the head noun (or adjective) that follows, e.g. "become player".
// Throws ValidationError for an empty extractor set.
std::vector<ExtractedHead> extract_heads(
    std::string_view text, const ExtractorSet& extractors = all_extractors());

// Sentence when a noun or pronoun precedes a verb, verb phrase when the
// head starts with a verb, noun phrase otherwise.
HeadForm classify_head_form(const KnowledgeHead& head);

}  // namespace kogito
