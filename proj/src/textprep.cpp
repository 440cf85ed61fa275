#include "dtc/textprep.hpp"

#include <array>
#include <cstdint>
#include <map>

#include "dtc/error.hpp"

namespace dtc::textprep {
namespace detail {
extern const std::string_view kDefaultEn127Source;
}

namespace {

constexpr bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }
constexpr bool is_ascii_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

// Decodes one UTF-8 sequence at s[i]; returns the code point and its length,
// or length 0 for an invalid sequence.
std::pair<std::uint32_t, std::size_t> decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if (b0 < 0x80) return {b0, 1};
  if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
  else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
  else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
  else return {0, 0};
  if (i + len > s.size()) return {0, 0};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (b & 0x3F);
  }
  constexpr std::array<std::uint32_t, 5> min_cp = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < min_cp[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {0, 0};
  return {cp, len};
}

constexpr bool is_unicode_punct(std::uint32_t cp) {
  return (cp >= 0x80 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 || (cp >= 0x2000 && cp <= 0x206F) ||
         (cp >= 0x20A0 && cp <= 0x20CF) || (cp >= 0x3000 && cp <= 0x303F) || cp == 0xFEFF;
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      // U+00C0..U+00DE except U+00D7 map to +0x20 (second byte 0x80..0x9E).
      const auto c1 = static_cast<unsigned char>(out[i + 1]);
      if (c1 >= 0x80 && c1 <= 0x9E && c1 != 0x97) out[i + 1] = static_cast<char>(c1 + 0x20);
      ++i;
    }
  }
  return out;
}

bool is_url_run(std::string_view run) {
  return run.starts_with("http://") || run.starts_with("https://") || run.starts_with("www.");
}

TokenSequence parse_stopword_source(std::string_view source) {
  TokenSequence words;
  while (!source.empty()) {
    const auto nl = source.find('\n');
    std::string_view line = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (!line.empty()) words.emplace_back(line);
  }
  return words;
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u'; }

std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z')
    stem.pop_back();
  return stem;
}

struct SuffixRule {
  std::string_view suffix;
  std::string_view replacement;
  std::size_t min_stem;  // letters that must remain before the suffix
  bool undouble;
  bool not_after_s;
};

constexpr std::array<SuffixRule, 7> kRules = {{
    {"ies", "y", 0, false, false},
    {"ied", "y", 0, false, false},
    {"ying", "y", 0, false, false},
    {"ing", "", 3, true, false},
    {"ed", "", 3, true, false},
    {"es", "", 3, false, false},
    {"s", "", 3, false, true},
}};

bool suffix_applies(const SuffixRule& rule, std::string_view token) {
  if (!token.ends_with(rule.suffix)) return false;
  const std::size_t stem = token.size() - rule.suffix.size();
  if (stem < rule.min_stem) return false;
  if (rule.not_after_s && stem > 0 && token[stem - 1] == 's') return false;
  return true;
}

std::string apply_rule(const SuffixRule& rule, std::string_view token) {
  std::string stem(token.substr(0, token.size() - rule.suffix.size()));
  if (rule.undouble) stem = undouble(std::move(stem));
  stem += rule.replacement;
  return stem;
}

bool untouched_by_rules(std::string_view token) {
  for (const auto& rule : kRules)
    if (suffix_applies(rule, token)) return false;
  return true;
}

}  // namespace

std::string normalize(std::string_view text) {
  const std::string lowered = lowercase(text);
  std::string mapped;
  mapped.reserve(lowered.size());

  std::size_t i = 0;
  while (i < lowered.size()) {
    if (is_space(lowered[i])) {
      mapped.push_back(' ');
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < lowered.size() && !is_space(lowered[end])) ++end;
    const std::string_view run(lowered.data() + i, end - i);
    if (is_url_run(run)) {
      mapped.push_back(' ');
      i = end;
      continue;
    }
    for (std::size_t k = 0; k < run.size();) {
      const auto [cp, len] = decode_utf8(run, k);
      if (len == 0) {
        mapped.push_back(' ');
        ++k;
      } else if (len == 1) {
        mapped.push_back(is_ascii_alnum(run[k]) ? run[k] : ' ');
        ++k;
      } else {
        if (is_unicode_punct(cp))
          mapped.push_back(' ');
        else
          mapped.append(run.substr(k, len));
        k += len;
      }
    }
    i = end;
  }

  std::string out;
  out.reserve(mapped.size());
  for (char c : mapped) {
    if (c == ' ') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

TokenSequence tokenize(std::string_view normalized) {
  TokenSequence tokens;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && is_space(normalized[i])) ++i;
    std::size_t end = i;
    while (end < normalized.size() && !is_space(normalized[end])) ++end;
    if (end > i) tokens.emplace_back(normalized.substr(i, end - i));
    i = end;
  }
  return tokens;
}

const std::unordered_set<std::string>& stopword_set(std::string_view list_id) {
  static const std::map<std::string, std::unordered_set<std::string>, std::less<>> lists = [] {
    std::map<std::string, std::unordered_set<std::string>, std::less<>> m;
    const auto words = parse_stopword_source(detail::kDefaultEn127Source);
    m.emplace(std::string(kDefaultStopwordList), std::unordered_set<std::string>(words.begin(), words.end()));
    return m;
  }();
  const auto it = lists.find(list_id);
  if (it == lists.end()) throw Error(ErrorKind::UnknownStopwordList, "no stopword list named '" + std::string(list_id) + "'");
  return it->second;
}

TokenSequence remove_stopwords(const TokenSequence& tokens, std::string_view list_id) {
  const auto& stop = stopword_set(list_id);
  TokenSequence out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stop.contains(t)) out.push_back(t);
  return out;
}

Token lemmatize(std::string_view token) {
  for (const auto& rule : kRules) {
    if (!suffix_applies(rule, token)) continue;
    std::string candidate = apply_rule(rule, token);
    if (untouched_by_rules(candidate)) return candidate;
  }
  return Token(token);
}

TokenSequence preprocess(std::string_view text, const PrepConfig& config) {
  TokenSequence tokens = tokenize(normalize(text));
  if (config.remove_stopwords) tokens = remove_stopwords(tokens, config.stopword_list_id);
  if (config.lemmatize)
    for (auto& t : tokens) t = lemmatize(t);
  return tokens;
}

}  // namespace dtc::textprep
