#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dtc::textprep {

using Token = std::string;
using TokenSequence = std::vector<Token>;

inline constexpr std::string_view kDefaultStopwordList = "default-en-127";

struct PrepConfig {
  bool remove_stopwords = true;
  bool lemmatize = true;
  std::string stopword_list_id{kDefaultStopwordList};

  bool operator==(const PrepConfig&) const = default;
};

/// Lowercases, deletes URL runs (whitespace-delimited runs starting with
/// "http://", "https://" or "www."), replaces every non letter/digit
/// character with a space and collapses whitespace. Non-ASCII letters are
/// kept; Latin-1 and general punctuation code points count as punctuation,
/// as do bytes that are not valid UTF-8.
std::string normalize(std::string_view text);

TokenSequence tokenize(std::string_view normalized);

/// Throws UnknownStopwordList if `list_id` is not shipped.
const std::unordered_set<std::string>& stopword_set(std::string_view list_id);
TokenSequence remove_stopwords(const TokenSequence& tokens, std::string_view list_id);

/// Ordered suffix rules, first match wins:
///   ies -> y, ied -> y, ying -> y,
///   ing -> ""  (>= 3 letters left; doubled final consonant undoubled except l/s/z),
///   ed  -> ""  (same guard and undoubling),
///   es  -> ""  (>= 3 letters left),
///   s   -> ""  (>= 3 letters left, not after s).
/// A rule only matches when its output is itself left alone by every rule,
/// which makes the function idempotent.
Token lemmatize(std::string_view token);

TokenSequence preprocess(std::string_view text, const PrepConfig& config = {});

}  // namespace dtc::textprep
