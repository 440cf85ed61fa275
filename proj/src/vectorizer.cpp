#include "dtc/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dtc/error.hpp"
#include "dtc/kernels.hpp"

namespace dtc::vectorizer {

std::string_view to_string(IdfMode mode) { return mode == IdfMode::PaperExact ? "paper_exact" : "smoothed"; }

IdfMode idf_mode_from_string(std::string_view name) {
  if (name == "paper_exact") return IdfMode::PaperExact;
  if (name == "smoothed") return IdfMode::Smoothed;
  throw Error(ErrorKind::InvalidConfig, "unknown idf mode '" + std::string(name) + "' (paper_exact|smoothed)");
}

void validate(const VectorizerConfig& config) {
  const auto& r = config.ngram_range;
  if (r.min_n < 1 || r.max_n < r.min_n || r.max_n > kMaxNgram)
    throw Error(ErrorKind::InvalidConfig, "ngram range (" + std::to_string(r.min_n) + "," + std::to_string(r.max_n) +
                                              ") must satisfy 1 <= min <= max <= " + std::to_string(kMaxNgram));
  if (config.max_features < 1) throw Error(ErrorKind::InvalidConfig, "max_features must be >= 1");
}

std::string fingerprint(const VectorizerConfig& config) {
  return "ngram=" + std::to_string(config.ngram_range.min_n) + "-" + std::to_string(config.ngram_range.max_n) +
         ";max_features=" + std::to_string(config.max_features) + ";idf=" + std::string(to_string(config.idf_mode)) +
         ";l2=" + (config.l2_normalize ? "1" : "0");
}

void Vocabulary::reindex() {
  index.clear();
  index.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) index.emplace(terms[i], i);
}

double idf_value(IdfMode mode, std::size_t n_docs, std::size_t df) {
  const auto n = static_cast<double>(n_docs);
  const auto d = static_cast<double>(df);
  if (mode == IdfMode::PaperExact) return std::log(n / d);
  return std::log((1.0 + n) / (1.0 + d)) + 1.0;
}

std::vector<std::string> extract_ngrams(const TokenSequence& tokens, NgramRange range) {
  std::vector<std::string> out;
  for (int n = range.min_n; n <= range.max_n; ++n) {
    const auto width = static_cast<std::size_t>(n);
    if (tokens.size() < width) continue;
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < width; ++k) {
        gram.push_back(' ');
        gram += tokens[i + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

FittedVocabulary fit_vocabulary(const std::vector<TokenSequence>& docs, const VectorizerConfig& config) {
  validate(config);
  if (docs.empty()) throw Error(ErrorKind::EmptyVocabulary, "no documents to fit");

  const auto counts = kernels::parallel::count_terms(docs, config.ngram_range);
  if (counts.empty()) throw Error(ErrorKind::EmptyVocabulary, "no document yields an n-gram");

  struct Candidate {
    const std::string* term;
    kernels::TermStats stats;
  };
  std::vector<Candidate> ranked;
  ranked.reserve(counts.size());
  for (const auto& [term, stats] : counts) ranked.push_back({&term, stats});

  const std::size_t keep = std::min(config.max_features, ranked.size());
  auto by_frequency = [](const Candidate& a, const Candidate& b) {
    if (a.stats.occurrences != b.stats.occurrences) return a.stats.occurrences > b.stats.occurrences;
    return *a.term < *b.term;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), by_frequency);
  ranked.resize(keep);
  std::sort(ranked.begin(), ranked.end(), [](const Candidate& a, const Candidate& b) { return *a.term < *b.term; });

  FittedVocabulary fit;
  fit.vocab.ngram_range = config.ngram_range;
  fit.vocab.max_features = config.max_features;
  fit.idf.n_docs = docs.size();
  fit.idf.mode = config.idf_mode;
  for (const auto& c : ranked) {
    fit.vocab.terms.push_back(*c.term);
    fit.idf.df.push_back(c.stats.doc_frequency);
    fit.idf.idf.push_back(idf_value(config.idf_mode, docs.size(), c.stats.doc_frequency));
  }
  fit.vocab.reindex();
  return fit;
}

FeatureVector transform(const TokenSequence& tokens, const Vocabulary& vocab, const IdfTable& idf,
                        const VectorizerConfig& config) {
  FeatureVector out;
  out.dimension = vocab.size();
  const auto grams = extract_ngrams(tokens, vocab.ngram_range);
  if (grams.empty()) return out;

  std::map<std::size_t, std::size_t> counts;
  for (const auto& g : grams)
    if (const auto it = vocab.index.find(g); it != vocab.index.end()) ++counts[it->second];

  const auto total = static_cast<double>(grams.size());
  for (const auto& [term, count] : counts) {
    const double weight = (static_cast<double>(count) / total) * idf.idf[term];
    if (weight != 0.0) out.entries.push_back({term, weight});
  }
  if (config.l2_normalize && !out.entries.empty()) {
    const double norm = std::sqrt(squared_norm(out));
    for (auto& e : out.entries) e.value /= norm;
  }
  return out;
}

std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const Vocabulary& vocab,
                                            const IdfTable& idf, const VectorizerConfig& config) {
  return kernels::parallel::transform_corpus(docs, vocab, idf, config);
}

}  // namespace dtc::vectorizer
