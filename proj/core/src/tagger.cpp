#include "kogito/tagger.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "kogito/error.hpp"
#include "kogito/text.hpp"
#include "lexicon_data.hpp"

namespace kogito {
namespace {

bool is_punct_byte(unsigned char c) {
  return c < 0x80 && !((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                       (c >= 'A' && c <= 'Z'));
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool contains(const std::vector<PosTag>& tags, PosTag t) {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

PosTag parse_tag(std::string_view s) {
  static const std::array<std::pair<std::string_view, PosTag>, 10> kTags = {{
      {"NOUN", PosTag::kNoun}, {"VERB", PosTag::kVerb}, {"ADJ", PosTag::kAdj},
      {"DET", PosTag::kDet}, {"PRON", PosTag::kPron}, {"ADP", PosTag::kAdp},
      {"ADV", PosTag::kAdv}, {"NUM", PosTag::kNum}, {"PUNCT", PosTag::kPunct},
      {"OTHER", PosTag::kOther},
  }};
  for (const auto& [name, tag] : kTags)
    if (name == s) return tag;
  throw ValidationError("unknown POS tag in lexicon: " + std::string(s));
}

bool is_number(std::string_view w) {
  bool digit = false;
  for (unsigned char c : w) {
    if (c >= '0' && c <= '9') digit = true;
    else if (c != ',' && c != '.' && c != '-' && c != '%') return false;
  }
  return digit;
}

bool is_person_placeholder(std::string_view lower) {
  return lower == "personx" || lower == "persony" || lower == "personz";
}

const std::unordered_set<std::string>& auxiliaries() {
  static const std::unordered_set<std::string> kAux = {
      "is", "am", "are", "was", "were", "be", "been", "being", "have", "has",
      "had", "do", "does", "did", "will", "would", "shall", "should", "can",
      "could", "may", "might", "must", "'s", "'re", "'ll", "'ve", "'d"};
  return kAux;
}

const std::unordered_set<std::string>& possessives() {
  static const std::unordered_set<std::string> kPoss = {
      "my", "your", "his", "her", "its", "our", "their", "whose"};
  return kPoss;
}

const std::unordered_set<std::string>& object_pronouns() {
  static const std::unordered_set<std::string> kObj = {"me", "him", "us",
                                                       "them", "whom"};
  return kObj;
}

std::vector<PosTag> suffix_candidates(std::string_view lower) {
  using T = PosTag;
  if (ends_with(lower, "ly") && lower.size() > 4) return {T::kAdv};
  if ((ends_with(lower, "ing") && lower.size() > 4) ||
      (ends_with(lower, "ed") && lower.size() > 3))
    return {T::kVerb, T::kAdj};
  for (std::string_view s : {"tion", "sion", "ness", "ment", "ity", "ism",
                             "ance", "ence", "ship", "hood", "ist"})
    if (ends_with(lower, s)) return {T::kNoun};
  for (std::string_view s :
       {"ous", "ful", "ive", "able", "ible", "less", "ish", "ic", "al"})
    if (ends_with(lower, s) && lower.size() > s.size() + 2) return {T::kAdj};
  if (ends_with(lower, "s") && !ends_with(lower, "ss") &&
      !ends_with(lower, "us") && !ends_with(lower, "is") && lower.size() > 3)
    return {T::kNoun, T::kVerb};
  return {T::kNoun};
}

const std::unordered_map<std::string, std::string>& irregular_verbs() {
  static const std::unordered_map<std::string, std::string> kIrregular = {
      {"is", "be"}, {"am", "be"}, {"are", "be"}, {"was", "be"},
      {"were", "be"}, {"been", "be"}, {"being", "be"}, {"has", "have"},
      {"had", "have"}, {"having", "have"}, {"does", "do"}, {"did", "do"},
      {"done", "do"}, {"doing", "do"}, {"went", "go"}, {"gone", "go"},
      {"goes", "go"}, {"made", "make"}, {"took", "take"}, {"taken", "take"},
      {"got", "get"}, {"gotten", "get"}, {"became", "become"},
      {"came", "come"}, {"saw", "see"}, {"seen", "see"}, {"said", "say"},
      {"ran", "run"}, {"bought", "buy"}, {"thought", "think"},
      {"brought", "bring"}, {"found", "find"}, {"gave", "give"},
      {"given", "give"}, {"knew", "know"}, {"known", "know"},
      {"left", "leave"}, {"felt", "feel"}, {"kept", "keep"}, {"told", "tell"},
      {"wrote", "write"}, {"written", "write"}, {"ate", "eat"},
      {"eaten", "eat"}, {"drank", "drink"}, {"began", "begin"},
      {"begun", "begin"}, {"won", "win"}, {"lost", "lose"}, {"paid", "pay"},
      {"sold", "sell"}, {"sent", "send"}, {"built", "build"},
      {"spent", "spend"}, {"met", "meet"}, {"sat", "sit"}, {"stood", "stand"},
      {"held", "hold"}, {"fell", "fall"}, {"wore", "wear"},
      {"broke", "break"}, {"broken", "break"}, {"chose", "choose"},
      {"chosen", "choose"}, {"drove", "drive"}, {"driven", "drive"},
      {"flew", "fly"}, {"flown", "fly"}, {"grew", "grow"}, {"grown", "grow"},
      {"threw", "throw"}, {"thrown", "throw"}, {"caught", "catch"},
      {"taught", "teach"}, {"fought", "fight"}, {"led", "lead"},
      {"slept", "sleep"}, {"heard", "hear"}, {"understood", "understand"},
      {"meant", "mean"}, {"lent", "lend"}, {"hid", "hide"},
      {"hidden", "hide"}, {"rode", "ride"}, {"ridden", "ride"},
      {"sang", "sing"}, {"sung", "sing"}, {"swam", "swim"},
      {"spoke", "speak"}, {"spoken", "speak"}, {"stole", "steal"},
      {"stolen", "steal"}, {"woke", "wake"}, {"forgot", "forget"},
      {"forgotten", "forget"}, {"forgave", "forgive"}, {"drew", "draw"},
      {"drawn", "draw"}, {"shot", "shoot"}, {"fed", "feed"}, {"fled", "flee"},
  };
  return kIrregular;
}

}  // namespace

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kDet: return "DET";
    case PosTag::kPron: return "PRON";
    case PosTag::kAdp: return "ADP";
    case PosTag::kAdv: return "ADV";
    case PosTag::kNum: return "NUM";
    case PosTag::kPunct: return "PUNCT";
    case PosTag::kOther: return "OTHER";
  }
  return "OTHER";
}

std::vector<std::string> split_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !is_space(sentence[j])) ++j;
    std::string_view chunk = sentence.substr(i, j - i);
    i = j;
    if (chunk.empty()) continue;
    std::size_t b = 0, e = chunk.size();
    while (b < e && is_punct_byte(chunk[b])) ++b;
    while (e > b && is_punct_byte(chunk[e - 1])) --e;
    for (std::size_t k = 0; k < b; ++k) out.emplace_back(1, chunk[k]);
    if (e > b) out.emplace_back(chunk.substr(b, e - b));
    for (std::size_t k = std::max(b, e); k < chunk.size(); ++k)
      out.emplace_back(1, chunk[k]);
  }
  return out;
}

const LexiconTagger& LexiconTagger::instance() {
  static const LexiconTagger kTagger = from_tsv(detail::kLexiconTsv);
  return kTagger;
}

LexiconTagger LexiconTagger::from_tsv(std::string_view tsv) {
  LexiconTagger tagger;
  std::size_t pos = 0;
  while (pos < tsv.size()) {
    auto eol = tsv.find('\n', pos);
    if (eol == std::string_view::npos) eol = tsv.size();
    std::string_view line = text::trim(tsv.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) continue;
    std::vector<PosTag> tags;
    std::string_view rest = line.substr(tab + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      tags.push_back(parse_tag(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    tagger.lexicon_[text::to_lower(line.substr(0, tab))] = std::move(tags);
  }
  return tagger;
}

bool LexiconTagger::in_lexicon(std::string_view word) const {
  return lexicon_.contains(text::to_lower(word));
}

std::vector<PosTag> LexiconTagger::candidates(std::string_view word) const {
  if (word.empty()) return {PosTag::kOther};
  if (std::all_of(word.begin(), word.end(),
                  [](unsigned char c) { return is_punct_byte(c); }))
    return {PosTag::kPunct};
  if (is_number(word)) return {PosTag::kNum};
  const std::string lower = text::to_lower(word);
  if (is_person_placeholder(lower)) return {PosTag::kPron};
  if (auto it = lexicon_.find(lower); it != lexicon_.end()) return it->second;
  if (ends_with(lower, "'s") || ends_with(lower, "s'")) return {PosTag::kNoun};
  if (word.front() >= 'A' && word.front() <= 'Z') return {PosTag::kNoun};
  return suffix_candidates(lower);
}

bool LexiconTagger::can_be(std::string_view word, PosTag tag) const {
  return contains(candidates(word), tag);
}

std::vector<TaggedToken> LexiconTagger::tag(std::string_view sentence) const {
  return tag_tokens(split_tokens(sentence));
}

std::vector<TaggedToken> LexiconTagger::tag_tokens(
    const std::vector<std::string>& tokens) const {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  bool seen_verb = false;
  // Inside a noun phrase opened by an article or possessive.
  bool np_open = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::vector<PosTag> cands = candidates(tokens[i]);
    const std::string lower = text::to_lower(tokens[i]);
    PosTag chosen = cands.front();
    if (np_open && cands.size() == 1 && chosen == PosTag::kVerb &&
        !auxiliaries().contains(lower) && !ends_with(lower, "ing") &&
        !ends_with(lower, "ed") && !irregular_verbs().contains(lower)) {
      // Lexicon gap: "the uses", "a good play".
      chosen = PosTag::kNoun;
    } else if (cands.size() > 1 && i > 0) {
      const PosTag prev = out.back().tag;
      const std::string prev_word = text::to_lower(out.back().surface);
      const bool nominal_context = prev == PosTag::kDet ||
                                   prev == PosTag::kAdj ||
                                   prev == PosTag::kNum ||
                                   possessives().contains(prev_word);
      const bool verbal_context =
          auxiliaries().contains(prev_word) || prev_word == "to" ||
          (prev == PosTag::kPron && !possessives().contains(prev_word) &&
           !object_pronouns().contains(prev_word));
      if (nominal_context && contains(cands, PosTag::kNoun)) {
        chosen = PosTag::kNoun;
      } else if (nominal_context && contains(cands, PosTag::kAdj)) {
        chosen = PosTag::kAdj;
      } else if (verbal_context && contains(cands, PosTag::kVerb)) {
        chosen = PosTag::kVerb;
      } else if (prev == PosTag::kNoun && !seen_verb &&
                 contains(cands, PosTag::kVerb)) {
        chosen = PosTag::kVerb;
      }
    } else if (cands.size() > 1 && contains(cands, PosTag::kVerb) &&
               i + 1 < tokens.size()) {
      // Sentence-initial verb reading before a determiner, pronoun, ...
      const PosTag next = candidates(tokens[i + 1]).front();
      if (next == PosTag::kDet || next == PosTag::kPron ||
          next == PosTag::kAdj || next == PosTag::kAdv ||
          next == PosTag::kAdp || next == PosTag::kNum)
        chosen = PosTag::kVerb;
    }
    seen_verb |= chosen == PosTag::kVerb;
    if (lower == "a" || lower == "an" || lower == "the" ||
        (possessives().contains(lower) && lower != "her"))
      np_open = true;
    else if (chosen != PosTag::kAdj)
      np_open = false;
    out.push_back({tokens[i], chosen});
  }
  return out;
}

std::string LexiconTagger::verb_lemma(std::string_view word) const {
  const std::string w = text::to_lower(word);
  if (auto it = irregular_verbs().find(w); it != irregular_verbs().end())
    return it->second;
  auto verb_ok = [&](const std::string& s) {
    auto it = lexicon_.find(s);
    return !s.empty() && it != lexicon_.end() && contains(it->second, PosTag::kVerb);
  };
  auto dedouble = [](const std::string& s) {
    if (s.size() >= 3 && s[s.size() - 1] == s[s.size() - 2])
      return s.substr(0, s.size() - 1);
    return std::string{};
  };
  std::vector<std::string> options;
  std::string fallback;
  if (ends_with(w, "ies") && w.size() > 4) {
    options = {w.substr(0, w.size() - 3) + "y"};
    fallback = options[0];
  } else if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 3) {
    options = {w.substr(0, w.size() - 1), w.substr(0, w.size() - 2)};
    fallback = options[0];
  } else if (ends_with(w, "ied") && w.size() > 4) {
    options = {w.substr(0, w.size() - 3) + "y"};
    fallback = options[0];
  } else if (ends_with(w, "ed") && w.size() > 3) {
    const std::string stem = w.substr(0, w.size() - 2);
    options = {w.substr(0, w.size() - 1), stem, dedouble(stem)};
    fallback = stem;
  } else if (ends_with(w, "ing") && w.size() > 4) {
    const std::string stem = w.substr(0, w.size() - 3);
    options = {stem, stem + "e", dedouble(stem)};
    fallback = stem;
  } else {
    return w;
  }
  for (const auto& o : options)
    if (verb_ok(o)) return o;
  if (lexicon_.contains(w)) return w;
  return fallback;
}

}  // namespace kogito
