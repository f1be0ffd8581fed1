#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace kogito::text {

// Version tag of the embedded stopword list.
inline constexpr std::string_view kStopwordListVersion = "en-v1";

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
// Lowercase, trim, and collapse internal whitespace runs to one space.
std::string normalize_space(std::string_view s);

// Lowercased alphanumeric runs; every other byte separates tokens. Bytes
// >= 0x80 count as alphanumeric so UTF-8 words stay whole.
std::vector<std::string> word_tokens(std::string_view s);

// English stopwords plus the PersonX/PersonY/PersonZ placeholders.
const std::unordered_set<std::string>& stopwords();
bool is_stopword(std::string_view token);

std::vector<std::string> content_tokens(std::string_view s);

}  // namespace kogito::text
