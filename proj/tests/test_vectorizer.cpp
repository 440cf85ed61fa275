#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"

#include "dtc/error.hpp"
#include "dtc/splitmix.hpp"
#include "dtc/vectorizer.hpp"

using namespace dtc;
using namespace dtc::vectorizer;

namespace {

const std::vector<TokenSequence> kThreeDocs = {{"good", "hotel"}, {"bad", "hotel"}, {"good", "stay"}};

VectorizerConfig unigram_exact(std::size_t max_features = 10, bool l2 = false) {
  VectorizerConfig c;
  c.ngram_range = {1, 1};
  c.max_features = max_features;
  c.idf_mode = IdfMode::PaperExact;
  c.l2_normalize = l2;
  return c;
}

double weight_of(const FeatureVector& v, std::size_t index) {
  for (const auto& e : v.entries)
    if (e.index == index) return e.value;
  return 0.0;
}

// Dense TF-IDF computed from the textbook definitions with no shared code:
// every n-gram is rebuilt by string concatenation and every count by a scan.
struct DenseOracle {
  std::vector<std::string> terms;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> oracle_grams(const TokenSequence& doc, int lo, int hi) {
  std::vector<std::string> grams;
  for (int n = lo; n <= hi; ++n)
    for (int i = 0; i + n <= static_cast<int>(doc.size()); ++i) {
      std::string g;
      for (int k = 0; k < n; ++k) g += (k ? " " : "") + doc[static_cast<std::size_t>(i + k)];
      grams.push_back(g);
    }
  return grams;
}

DenseOracle brute_force(const std::vector<TokenSequence>& docs, const VectorizerConfig& config) {
  const int lo = config.ngram_range.min_n, hi = config.ngram_range.max_n;
  std::vector<std::vector<std::string>> grams;
  std::set<std::string> all;
  for (const auto& d : docs) {
    grams.push_back(oracle_grams(d, lo, hi));
    all.insert(grams.back().begin(), grams.back().end());
  }
  std::vector<std::pair<long, std::string>> ranked;
  for (const auto& t : all) {
    long occ = 0;
    for (const auto& g : grams) occ += std::count(g.begin(), g.end(), t);
    ranked.emplace_back(-occ, t);
  }
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > config.max_features) ranked.resize(config.max_features);

  DenseOracle out;
  for (const auto& r : ranked) out.terms.push_back(r.second);
  std::sort(out.terms.begin(), out.terms.end());

  const double n = static_cast<double>(docs.size());
  std::vector<double> idf;
  for (const auto& t : out.terms) {
    double df = 0;
    for (const auto& g : grams) df += std::find(g.begin(), g.end(), t) != g.end() ? 1 : 0;
    idf.push_back(config.idf_mode == IdfMode::PaperExact ? std::log(n / df) : std::log((1 + n) / (1 + df)) + 1);
  }
  for (const auto& g : grams) {
    std::vector<double> row(out.terms.size(), 0.0);
    for (std::size_t j = 0; j < out.terms.size(); ++j) {
      const double c = static_cast<double>(std::count(g.begin(), g.end(), out.terms[j]));
      if (!g.empty()) row[j] = c / static_cast<double>(g.size()) * idf[j];
    }
    if (config.l2_normalize) {
      double ss = 0;
      for (double x : row) ss += x * x;
      if (ss > 0)
        for (double& x : row) x /= std::sqrt(ss);
    }
    out.rows.push_back(row);
  }
  return out;
}

std::vector<TokenSequence> random_corpus(SplitMix64& rng) {
  static const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f"};
  std::vector<TokenSequence> docs(1 + rng.below(5));
  for (auto& d : docs) {
    const std::size_t len = rng.below(9);
    for (std::size_t i = 0; i < len; ++i) d.push_back(words[rng.below(words.size())]);
  }
  while (docs[0].size() < 3) docs[0].push_back(words[rng.below(words.size())]);
  return docs;
}

VectorizerConfig random_config(SplitMix64& rng) {
  VectorizerConfig c;
  const int lo = 1 + static_cast<int>(rng.below(2));
  c.ngram_range = {lo, lo + static_cast<int>(rng.below(2))};
  c.max_features = 1 + rng.below(12);
  c.idf_mode = rng.below(2) ? IdfMode::PaperExact : IdfMode::Smoothed;
  c.l2_normalize = rng.below(2) == 1;
  return c;
}

}  // namespace

TEST_CASE("extract_ngrams windows") {
  CHECK(extract_ngrams({"a", "b", "c"}, {2, 2}) == std::vector<std::string>{"a b", "b c"});
  CHECK(extract_ngrams({"a", "b"}, {1, 2}) == std::vector<std::string>{"a", "b", "a b"});
  CHECK(extract_ngrams({"a"}, {2, 2}).empty());
  CHECK(extract_ngrams({}, {1, 3}).empty());
  CHECK(extract_ngrams({"x", "y", "z"}, {1, 3}) ==
        std::vector<std::string>{"x", "y", "z", "x y", "y z", "x y z"});
}

TEST_CASE("config validation and fingerprint") {
  VectorizerConfig c;
  CHECK(fingerprint(c) == "ngram=2-2;max_features=1000;idf=smoothed;l2=1");
  CHECK_NOTHROW(validate(c));
  for (NgramRange bad : {NgramRange{0, 1}, NgramRange{2, 1}, NgramRange{1, kMaxNgram + 1}}) {
    c.ngram_range = bad;
    CHECK_THROWS_AS(validate(c), Error);
  }
  c = {};
  c.max_features = 0;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK(idf_mode_from_string("paper_exact") == IdfMode::PaperExact);
  CHECK(idf_mode_from_string(to_string(IdfMode::Smoothed)) == IdfMode::Smoothed);
  CHECK_THROWS_AS(idf_mode_from_string("bm25"), Error);
}

TEST_CASE("three-document fit by hand") {
  const auto fit = fit_vocabulary(kThreeDocs, unigram_exact());
  CHECK(fit.vocab.terms == std::vector<std::string>{"bad", "good", "hotel", "stay"});
  CHECK(fit.idf.df == std::vector<std::size_t>{1, 2, 2, 1});
  CHECK(fit.idf.n_docs == 3);
  CHECK(fit.idf.idf[2] == doctest::Approx(0.405465).epsilon(1e-6));
  CHECK(fit.idf.idf[2] == std::log(3.0 / 2.0));
  CHECK(fit.idf.idf[0] == std::log(3.0));

  const auto v = transform({"good", "hotel"}, fit.vocab, fit.idf, unigram_exact());
  CHECK(v.dimension == 4);
  CHECK(weight_of(v, 1) == doctest::Approx(0.202733).epsilon(1e-6));
  CHECK(weight_of(v, 2) == weight_of(v, 1));
  CHECK(v.entries.size() == 2);

  const auto smooth = fit_vocabulary(kThreeDocs, [] {
    auto c = unigram_exact();
    c.idf_mode = IdfMode::Smoothed;
    return c;
  }());
  CHECK(smooth.idf.idf[2] == std::log(4.0 / 3.0) + 1.0);
}

TEST_CASE("idf is zero for a term in every document") {
  const std::vector<TokenSequence> docs = {{"room", "a"}, {"room", "b"}, {"room"}};
  const auto fit = fit_vocabulary(docs, unigram_exact());
  const auto room = fit.vocab.index.at("room");
  CHECK(fit.idf.idf[room] == 0.0);
  const auto v = transform({"room", "a"}, fit.vocab, fit.idf, unigram_exact());
  CHECK(weight_of(v, room) == 0.0);
  CHECK(weight_of(v, fit.vocab.index.at("a")) != 0.0);
  CHECK(is_canonical(v));
}

TEST_CASE("weight is zero when the term is absent") {
  const auto fit = fit_vocabulary(kThreeDocs, unigram_exact());
  const auto v = transform({"bad", "stay"}, fit.vocab, fit.idf, unigram_exact());
  CHECK(weight_of(v, fit.vocab.index.at("good")) == 0.0);
  CHECK(weight_of(v, fit.vocab.index.at("bad")) > 0.0);
  CHECK(transform({"unknown", "words"}, fit.vocab, fit.idf, unigram_exact()).entries.empty());
  const auto empty = transform({}, fit.vocab, fit.idf, unigram_exact());
  CHECK(empty.entries.empty());
  CHECK(empty.dimension == 4);
}

TEST_CASE("max_features keeps the most frequent, ties lexicographic") {
  const std::vector<TokenSequence> ties = {{"e", "d", "c", "b", "a"}};
  CHECK(fit_vocabulary(ties, unigram_exact(3)).vocab.terms == std::vector<std::string>{"a", "b", "c"});

  const std::vector<TokenSequence> skewed = {{"z", "z", "z", "y", "y", "a", "b"}};
  CHECK(fit_vocabulary(skewed, unigram_exact(3)).vocab.terms == std::vector<std::string>{"a", "y", "z"});
  CHECK(fit_vocabulary(skewed, unigram_exact(2)).vocab.terms == std::vector<std::string>{"y", "z"});
}

TEST_CASE("documents without n-grams count toward N") {
  const std::vector<TokenSequence> docs = {{"a", "b"}, {"c"}, {}};
  VectorizerConfig c = unigram_exact();
  c.ngram_range = {2, 2};
  const auto fit = fit_vocabulary(docs, c);
  CHECK(fit.vocab.terms == std::vector<std::string>{"a b"});
  CHECK(fit.idf.n_docs == 3);
  CHECK(fit.idf.idf[0] == std::log(3.0));
  CHECK(transform({"c"}, fit.vocab, fit.idf, c).entries.empty());
}

TEST_CASE("empty vocabulary is an error") {
  VectorizerConfig c;
  CHECK_THROWS_AS(fit_vocabulary({}, c), Error);
  try {
    fit_vocabulary({{"lonely"}, {"words"}}, c);
    FAIL("expected EmptyVocabulary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyVocabulary);
  }
}

TEST_CASE("l2 normalization gives unit norm") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto docs = random_corpus(rng);
    auto c = random_config(rng);
    c.l2_normalize = true;
    const auto fit = fit_vocabulary(docs, c);
    for (const auto& v : transform_corpus(docs, fit.vocab, fit.idf, c)) {
      if (v.entries.empty()) continue;
      CHECK(std::abs(std::sqrt(squared_norm(v)) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("paper-exact idf is nonincreasing in df") {
  for (std::size_t n : {1u, 2u, 7u, 100u})
    for (std::size_t df = 1; df < n; ++df)
      CHECK(idf_value(IdfMode::PaperExact, n, df) >= idf_value(IdfMode::PaperExact, n, df + 1));
}

TEST_CASE("fit is invariant under document permutation") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto docs = random_corpus(rng);
    const auto c = random_config(rng);
    const auto a = fit_vocabulary(docs, c);
    fisher_yates(std::span(docs), rng);
    const auto b = fit_vocabulary(docs, c);
    CHECK(a.vocab.terms == b.vocab.terms);
    CHECK(a.idf.df == b.idf.df);
    CHECK(a.idf.idf == b.idf.idf);
  }
}

TEST_CASE("transform_corpus matches brute-force oracle on random corpora") {
  SplitMix64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto docs = random_corpus(rng);
    const auto c = random_config(rng);
    const auto oracle = brute_force(docs, c);
    const auto fit = fit_vocabulary(docs, c);
    REQUIRE(fit.vocab.terms == oracle.terms);
    const auto vs = transform_corpus(docs, fit.vocab, fit.idf, c);
    REQUIRE(vs.size() == docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      CHECK(is_canonical(vs[i]));
      for (std::size_t j = 0; j < oracle.terms.size(); ++j) CHECK(std::abs(weight_of(vs[i], j) - oracle.rows[i][j]) < 1e-12);
    }
    ++compared;
  }
  CHECK(compared == 200);
}

TEST_CASE("transform_corpus is elementwise transform") {
  const auto c = unigram_exact(10, true);
  const auto fit = fit_vocabulary(kThreeDocs, c);
  const auto vs = transform_corpus(kThreeDocs, fit.vocab, fit.idf, c);
  REQUIRE(vs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(vs[i] == transform(kThreeDocs[i], fit.vocab, fit.idf, c));
  CHECK(transform_corpus({}, fit.vocab, fit.idf, c).empty());
}

TEST_CASE("sparse helpers") {
  FeatureVector a{{{0, 1.0}, {3, 2.0}}, 5};
  FeatureVector b{{{1, 4.0}, {3, -1.0}, {4, 0.5}}, 5};
  CHECK(is_canonical(a));
  CHECK(dot(a, b) == -2.0);
  CHECK(squared_norm(b) == 17.25);
  CHECK(squared_distance(a, b) == 1.0 + 16.0 + 9.0 + 0.25);
  CHECK(squared_distance(a, b) == squared_distance(b, a));
  const std::vector<double> dense = {1, 1, 1, 1, 1};
  CHECK(dot(dense, b) == 3.5);
  CHECK_FALSE(is_canonical(FeatureVector{{{3, 1.0}, {1, 1.0}}, 5}));
  CHECK_FALSE(is_canonical(FeatureVector{{{1, 1.0}, {1, 2.0}}, 5}));
  CHECK_FALSE(is_canonical(FeatureVector{{{1, 0.0}}, 5}));
  CHECK_FALSE(is_canonical(FeatureVector{{{5, 1.0}}, 5}));
  CHECK_FALSE(is_canonical(FeatureVector{{{2, std::nan("")}}, 5}));
}
