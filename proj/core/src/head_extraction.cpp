#include "kogito/head_extraction.hpp"

#include <algorithm>
#include <unordered_set>

#include "kogito/error.hpp"
#include "kogito/tagger.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}';
}

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> kDet = {
      "a", "an", "the", "this", "that", "these", "those", "some", "any",
      "every", "each", "another", "no"};
  return kDet;
}

struct NounChunk {
  std::size_t begin;       // first token of the chunk (DET/ADJ included)
  std::size_t noun_begin;  // first noun
  std::size_t end;         // one past the last noun
};

std::vector<NounChunk> noun_chunks(const std::vector<TaggedToken>& toks) {
  std::vector<NounChunk> out;
  std::size_t i = 0;
  while (i < toks.size()) {
    const std::size_t start = i;
    std::size_t j = i;
    if (toks[j].tag == PosTag::kDet) ++j;
    while (j < toks.size() &&
           (toks[j].tag == PosTag::kAdj || toks[j].tag == PosTag::kNum))
      ++j;
    const std::size_t noun_begin = j;
    while (j < toks.size() && toks[j].tag == PosTag::kNoun) ++j;
    if (j > noun_begin) {
      out.push_back({start, noun_begin, j});
      i = j;
    } else {
      i = start + 1;
    }
  }
  return out;
}

std::string join(const std::vector<TaggedToken>& toks, std::size_t b,
                 std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out.push_back(' ');
    out += toks[i].surface;
  }
  return out;
}

std::string strip_terminal(std::string_view sentence) {
  std::string_view s = text::trim(sentence);
  while (!s.empty() && (is_terminal(s.back()) || s.back() == ';' ||
                        s.back() == ':' || s.back() == ','))
    s.remove_suffix(1);
  return std::string(text::trim(s));
}

bool is_negation(std::string_view w) {
  return w == "not" || w == "n't" || w == "never";
}

}  // namespace

std::string_view to_string(HeadForm form) {
  switch (form) {
    case HeadForm::kSentence: return "sentence";
    case HeadForm::kNounPhrase: return "noun_phrase";
    case HeadForm::kVerbPhrase: return "verb_phrase";
  }
  return "sentence";
}

HeadForm parse_head_form(std::string_view name) {
  if (name == "sentence") return HeadForm::kSentence;
  if (name == "noun_phrase" || name == "np") return HeadForm::kNounPhrase;
  if (name == "verb_phrase" || name == "vp") return HeadForm::kVerbPhrase;
  throw UsageError("unknown head extractor: " + std::string(name));
}

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "mt", "vs", "etc",
      "e.g", "i.e", "inc", "ltd", "co", "corp", "gen", "gov", "sen", "rep",
      "capt", "col", "lt", "sgt", "no", "fig", "jan", "feb", "mar", "apr",
      "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "approx",
      "dept", "est", "ave", "blvd", "rd", "u.s", "a.m", "p.m"};
  return kAbbrev;
}

std::vector<std::string> segment_sentences(std::string_view text,
                                           const SegmentOptions& options) {
  std::unordered_set<std::string> abbrev(default_abbreviations().begin(),
                                         default_abbreviations().end());
  for (const auto& a : options.extra_abbreviations)
    abbrev.insert(text::to_lower(a));

  std::vector<std::string> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    auto seg = text::trim(text.substr(b, e - b));
    if (!seg.empty()) out.emplace_back(seg);
  };

  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == '\n') {
      std::size_t k = i + 1;
      while (k < n && is_space(text[k]) && text[k] != '\n') ++k;
      if (k < n && text[k] == '\n') {
        emit(start, i);
        start = k;
        i = k;
        continue;
      }
    }
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminal(text[j])) ++j;
    while (j < n && is_closer(text[j])) ++j;
    if (j >= n || !is_space(text[j])) {
      i = j;
      continue;
    }
    std::size_t k = j;
    while (k < n && is_space(text[k])) ++k;
    std::size_t look = k;
    while (look < n && (text[look] == '"' || text[look] == '\'' ||
                        text[look] == '(' || text[look] == '['))
      ++look;
    if (look >= n || !(is_upper(text[look]) || is_digit(text[look]))) {
      i = j;
      continue;
    }
    if (text[i] == '.' && j == i + 1) {
      std::size_t w = i;
      while (w > start && !is_space(text[w - 1])) --w;
      std::string_view word = text.substr(w, i - w);
      while (!word.empty() && (word.front() == '(' || word.front() == '"'))
        word.remove_prefix(1);
      const bool single_letter =
          options.guard_single_letters && word.size() == 1 &&
          is_upper(word[0]);
      if (single_letter || abbrev.contains(text::to_lower(word))) {
        i = j;
        continue;
      }
    }
    emit(start, j);
    start = j;
    i = j;
  }
  emit(start, n);
  return out;
}

std::string head_dedup_key(std::string_view head) {
  std::string norm = text::normalize_space(head);
  for (;;) {
    const auto sp = norm.find(' ');
    if (sp == std::string::npos || !determiners().contains(norm.substr(0, sp)))
      break;
    norm.erase(0, sp + 1);
  }
  return norm;
}

std::vector<ExtractedHead> extract_heads(std::string_view text,
                                         const ExtractorSet& extractors) {
  if (extractors.empty())
    throw ValidationError("at least one head extractor is required");
  const auto& tagger = LexiconTagger::instance();
  std::vector<ExtractedHead> out;
  std::unordered_set<std::string> seen;
  auto add = [&](std::string head, HeadForm form, std::size_t sentence) {
    if (text::trim(head).empty()) return;
    if (!seen.insert(head_dedup_key(head)).second) return;
    out.push_back({KnowledgeHead(std::move(head)), form, sentence});
  };

  const auto sentences = segment_sentences(text);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (extractors.contains(HeadForm::kSentence))
      add(strip_terminal(sentences[s]), HeadForm::kSentence, s);
    const bool want_np = extractors.contains(HeadForm::kNounPhrase);
    const bool want_vp = extractors.contains(HeadForm::kVerbPhrase);
    if (!want_np && !want_vp) continue;

    const auto toks = tagger.tag(sentences[s]);
    const auto chunks = noun_chunks(toks);
    if (want_np) {
      for (const auto& c : chunks) {
        add(join(toks, c.noun_begin, c.end), HeadForm::kNounPhrase, s);
        if (c.end - c.noun_begin >= 2)
          for (std::size_t k = c.noun_begin; k < c.end; ++k)
            add(toks[k].surface, HeadForm::kNounPhrase, s);
      }
    }
    if (!want_vp) continue;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].tag != PosTag::kVerb) continue;
      std::size_t k = i + 1;
      while (k < toks.size() &&
             (toks[k].tag == PosTag::kAdv || is_negation(toks[k].surface)))
        ++k;
      if (k < toks.size() && toks[k].tag == PosTag::kVerb) continue;  // auxiliary
      std::string phrase = tagger.verb_lemma(toks[i].surface);
      if (k < toks.size() && toks[k].tag == PosTag::kAdp) {
        const auto next = k + 1;
        auto it = std::find_if(chunks.begin(), chunks.end(),
                               [&](const NounChunk& c) { return c.begin == next; });
        if (it != chunks.end()) {
          add(phrase + ' ' + text::to_lower(toks[k].surface) + ' ' +
                  toks[it->end - 1].surface,
              HeadForm::kVerbPhrase, s);
        }
        continue;
      }
      auto it = std::find_if(chunks.begin(), chunks.end(),
                             [&](const NounChunk& c) { return c.begin == k; });
      if (it != chunks.end()) {
        add(phrase + ' ' + toks[it->end - 1].surface, HeadForm::kVerbPhrase, s);
      } else if (k < toks.size() && toks[k].tag == PosTag::kAdj) {
        add(phrase + ' ' + toks[k].surface, HeadForm::kVerbPhrase, s);
      }
    }
  }
  return out;
}

HeadForm classify_head_form(const KnowledgeHead& head) {
  auto toks = LexiconTagger::instance().tag(head.text());
  std::erase_if(toks, [](const TaggedToken& t) { return t.tag == PosTag::kPunct; });
  if (toks.empty()) return HeadForm::kNounPhrase;
  if (toks.front().tag == PosTag::kVerb) return HeadForm::kVerbPhrase;
  bool subject = false;
  for (const auto& t : toks) {
    if (t.tag == PosTag::kVerb && subject) return HeadForm::kSentence;
    if (t.tag == PosTag::kNoun || t.tag == PosTag::kPron) subject = true;
  }
  return HeadForm::kNounPhrase;
}

}  // namespace kogito
