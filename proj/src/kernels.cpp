#include "dtc/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <exception>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dtc::kernels {
namespace {

void accumulate_doc(TermCounts& counts, const TokenSequence& doc, vectorizer::NgramRange range) {
  const auto grams = vectorizer::extract_ngrams(doc, range);
  std::unordered_set<std::string_view> seen;
  for (const auto& g : grams) {
    auto& stats = counts[g];
    ++stats.occurrences;
    if (seen.insert(g).second) ++stats.doc_frequency;
  }
}

// Rethrows the first exception captured inside an OpenMP region.
class ExceptionSlot {
 public:
  template <typename F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(dtc_exception_slot)
#endif
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial {

std::vector<TokenSequence> preprocess_corpus(std::span<const std::string> texts, const textprep::PrepConfig& prep) {
  std::vector<TokenSequence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(textprep::preprocess(t, prep));
  return out;
}

TermCounts count_terms(const std::vector<TokenSequence>& docs, vectorizer::NgramRange range) {
  TermCounts counts;
  for (const auto& doc : docs) accumulate_doc(counts, doc, range);
  return counts;
}

std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const vectorizer::Vocabulary& vocab,
                                            const vectorizer::IdfTable& idf, const vectorizer::VectorizerConfig& config) {
  std::vector<FeatureVector> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(vectorizer::transform(doc, vocab, idf, config));
  return out;
}

std::vector<double> rbf_gram(std::span<const FeatureVector> X, double gamma) {
  const std::size_t n = X.size();
  std::vector<double> gram(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram[i * n + j] = classifiers::rbf_kernel(X[i], X[j], gamma);
  return gram;
}

std::vector<double> score_batch(const classifiers::TrainedModel& model, std::span<const FeatureVector> X) {
  std::vector<double> scores;
  scores.reserve(X.size());
  for (const auto& x : X) scores.push_back(classifiers::decision_score(model, x));
  return scores;
}

}  // namespace serial

namespace parallel {

std::vector<TokenSequence> preprocess_corpus(std::span<const std::string> texts, const textprep::PrepConfig& prep) {
  textprep::stopword_set(prep.stopword_list_id);  // resolve (and fail) outside the parallel region
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
  std::vector<TokenSequence> out(texts.size());
  ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    slot.run([&] { out[k] = textprep::preprocess(texts[k], prep); });
  }
  slot.rethrow();
  return out;
}

TermCounts count_terms(const std::vector<TokenSequence>& docs, vectorizer::NgramRange range) {
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::vector<TermCounts> partial(static_cast<std::size_t>(max_threads()));
  ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
#ifdef _OPENMP
    auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
#else
    auto& local = partial[0];
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i)
      slot.run([&] { accumulate_doc(local, docs[static_cast<std::size_t>(i)], range); });
  }
  slot.rethrow();

  // Integer counts, so the merge order does not affect the result.
  TermCounts merged = std::move(partial.front());
  for (std::size_t t = 1; t < partial.size(); ++t) {
    for (auto& [term, stats] : partial[t]) {
      auto& into = merged[term];
      into.occurrences += stats.occurrences;
      into.doc_frequency += stats.doc_frequency;
    }
  }
  return merged;
}

std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const vectorizer::Vocabulary& vocab,
                                            const vectorizer::IdfTable& idf, const vectorizer::VectorizerConfig& config) {
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
  std::vector<FeatureVector> out(docs.size());
  ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    slot.run([&] { out[k] = vectorizer::transform(docs[k], vocab, idf, config); });
  }
  slot.rethrow();
  return out;
}

std::vector<double> rbf_gram(std::span<const FeatureVector> X, double gamma) {
  const std::size_t n = X.size();
  const auto rows = static_cast<std::ptrdiff_t>(n);
  std::vector<double> gram(n * n);
  // Upper triangle computed once per pair; the mirror write keeps symmetry exact.
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const auto i = static_cast<std::size_t>(r);
    gram[i * n + i] = classifiers::rbf_kernel(X[i], X[i], gamma);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = classifiers::rbf_kernel(X[i], X[j], gamma);
      gram[i * n + j] = k;
      gram[j * n + i] = k;
    }
  }
  return gram;
}

std::vector<double> score_batch(const classifiers::TrainedModel& model, std::span<const FeatureVector> X) {
  const auto n = static_cast<std::ptrdiff_t>(X.size());
  std::vector<double> scores(X.size());
  ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    slot.run([&] { scores[k] = classifiers::decision_score(model, X[k]); });
  }
  slot.rethrow();
  return scores;
}

}  // namespace parallel
}  // namespace dtc::kernels
