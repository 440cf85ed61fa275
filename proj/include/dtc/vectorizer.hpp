#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dtc/sparse.hpp"
#include "dtc/textprep.hpp"

namespace dtc::vectorizer {

using textprep::TokenSequence;

inline constexpr int kMaxNgram = 5;

struct NgramRange {
  int min_n = 2;
  int max_n = 2;

  bool operator==(const NgramRange&) const = default;
};

enum class IdfMode {
  PaperExact,  // ln(N / df)
  Smoothed,    // ln((1 + N) / (1 + df)) + 1
};

std::string_view to_string(IdfMode mode);
IdfMode idf_mode_from_string(std::string_view name);

struct VectorizerConfig {
  NgramRange ngram_range{};
  std::size_t max_features = 1000;
  IdfMode idf_mode = IdfMode::Smoothed;
  bool l2_normalize = true;

  bool operator==(const VectorizerConfig&) const = default;
};

/// Throws InvalidConfig unless 1 <= min_n <= max_n <= kMaxNgram and max_features >= 1.
void validate(const VectorizerConfig& config);

/// Short stable string identifying a config, e.g. "ngram=2-2;max_features=1000;idf=smoothed;l2=1".
std::string fingerprint(const VectorizerConfig& config);

struct Vocabulary {
  std::vector<std::string> terms;  // lexicographic order
  std::unordered_map<std::string, std::size_t> index;
  NgramRange ngram_range{};
  std::size_t max_features = 0;

  std::size_t size() const noexcept { return terms.size(); }

  /// Rebuilds `index` from `terms`.
  void reindex();
};

struct IdfTable {
  std::vector<double> idf;
  std::vector<std::size_t> df;
  std::size_t n_docs = 0;
  IdfMode mode = IdfMode::Smoothed;
};

struct FittedVocabulary {
  Vocabulary vocab;
  IdfTable idf;
};

double idf_value(IdfMode mode, std::size_t n_docs, std::size_t df);

/// Space-joined n-grams for n = min_n..max_n, grouped by ascending n, each
/// group in document order.
std::vector<std::string> extract_ngrams(const TokenSequence& tokens, NgramRange range);

/// Keeps the max_features terms with the highest total occurrence count (ties
/// broken lexicographically), stored in lexicographic order. Documents that
/// yield no n-grams still count toward N.
FittedVocabulary fit_vocabulary(const std::vector<TokenSequence>& docs, const VectorizerConfig& config);

/// TF = count / (n-grams in the document); weight = TF * idf, optionally
/// scaled to unit L2 norm.
FeatureVector transform(const TokenSequence& tokens, const Vocabulary& vocab, const IdfTable& idf,
                        const VectorizerConfig& config);

/// Elementwise transform, computed in parallel; output order follows input.
std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const Vocabulary& vocab,
                                            const IdfTable& idf, const VectorizerConfig& config);

}  // namespace dtc::vectorizer
