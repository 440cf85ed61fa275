#pragma once

// Data-parallel hot loops. Every kernel has a serial reference in
// kernels::serial with identical results; kernels::parallel is the OpenMP
// version used by the library. Each parallel iteration writes only its own
// output slot and no floating-point reduction crosses threads, so results do
// not depend on the thread count.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dtc/classifiers.hpp"
#include "dtc/sparse.hpp"
#include "dtc/vectorizer.hpp"

namespace dtc::kernels {

struct TermStats {
  std::uint64_t occurrences = 0;
  std::uint64_t doc_frequency = 0;

  bool operator==(const TermStats&) const = default;
};

using TermCounts = std::unordered_map<std::string, TermStats>;
using vectorizer::TokenSequence;

namespace serial {

std::vector<TokenSequence> preprocess_corpus(std::span<const std::string> texts, const textprep::PrepConfig& prep);

TermCounts count_terms(const std::vector<TokenSequence>& docs, vectorizer::NgramRange range);

std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const vectorizer::Vocabulary& vocab,
                                            const vectorizer::IdfTable& idf, const vectorizer::VectorizerConfig& config);

/// Dense row-major n x n matrix of exp(-gamma |x_i - x_j|^2).
std::vector<double> rbf_gram(std::span<const FeatureVector> X, double gamma);

std::vector<double> score_batch(const classifiers::TrainedModel& model, std::span<const FeatureVector> X);

}  // namespace serial

namespace parallel {

std::vector<TokenSequence> preprocess_corpus(std::span<const std::string> texts, const textprep::PrepConfig& prep);

TermCounts count_terms(const std::vector<TokenSequence>& docs, vectorizer::NgramRange range);

std::vector<FeatureVector> transform_corpus(const std::vector<TokenSequence>& docs, const vectorizer::Vocabulary& vocab,
                                            const vectorizer::IdfTable& idf, const vectorizer::VectorizerConfig& config);

std::vector<double> rbf_gram(std::span<const FeatureVector> X, double gamma);

std::vector<double> score_batch(const classifiers::TrainedModel& model, std::span<const FeatureVector> X);

}  // namespace parallel

/// Threads OpenMP will use for the parallel kernels (1 without OpenMP).
int max_threads();

}  // namespace dtc::kernels
