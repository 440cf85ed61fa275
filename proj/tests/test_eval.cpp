#include <cmath>

#include "doctest.h"

#include "dtc/error.hpp"
#include "dtc/eval.hpp"
#include "dtc/splitmix.hpp"

using namespace dtc;
using namespace dtc::eval;

namespace {

constexpr Label P = Label::Deceptive;
constexpr Label N = Label::Truthful;

double pair_count_auc(const std::vector<Label>& y, const std::vector<double>& s) {
  double credit = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[i] != P || y[j] != N) continue;
      pairs += 1;
      credit += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  return credit / pairs;
}

struct Sample {
  std::vector<Label> y;
  std::vector<double> s;
};

// Both classes present; scores drawn from a small grid when `ties` is set.
Sample random_sample(SplitMix64& rng, std::size_t n, bool ties) {
  Sample out;
  for (std::size_t i = 0; i < n; ++i) {
    out.y.push_back(rng.below(2) ? P : N);
    out.s.push_back(ties ? static_cast<double>(rng.below(5)) : rng.uniform() * 10 - 5);
  }
  out.y[0] = P;
  out.y[1] = N;
  return out;
}

ConfusionMatrix random_confusion(SplitMix64& rng) {
  ConfusionMatrix cm{rng.below(20), rng.below(20), rng.below(20), rng.below(20)};
  if (cm.total() == 0) cm.tn = 1;
  return cm;
}

ErrorKind kind_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Empty;
}

}  // namespace

TEST_CASE("confusion counts") {
  const std::vector<Label> truth = {P, P, N, N};
  CHECK(confusion(truth, std::vector<Label>{P, N, N, N}) == ConfusionMatrix{1, 0, 1, 2});
  CHECK(confusion(truth, truth) == ConfusionMatrix{2, 0, 0, 2});
  CHECK(confusion(std::vector<Label>{N, N, N}, std::vector<Label>{P, P, P}) == ConfusionMatrix{0, 3, 0, 0});
  CHECK(kind_of([&] { confusion(truth, std::vector<Label>{P}); }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([] { confusion({}, {}); }) == ErrorKind::Empty);
}

TEST_CASE("hand-computed metrics") {
  const ConfusionMatrix cm{1, 0, 1, 2};
  const auto pos = prf_metrics(cm, Averaging::PositiveClass);
  CHECK(pos.precision == 1.0);
  CHECK(pos.recall == 0.5);
  CHECK(pos.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(accuracy(cm) == 0.75);

  // Truthful as positive: tp=2, fp=1, fn=0.
  const auto macro = prf_metrics(cm, Averaging::Macro);
  CHECK(macro.precision == doctest::Approx((1.0 + 2.0 / 3.0) / 2));
  CHECK(macro.recall == doctest::Approx((0.5 + 1.0) / 2));
  CHECK(macro.f1 == doctest::Approx((2.0 / 3.0 + 0.8) / 2));
  const auto weighted = prf_metrics(cm, Averaging::Weighted);
  CHECK(weighted.precision == doctest::Approx(macro.precision));
  CHECK(weighted.f1 == doctest::Approx(macro.f1));

  const ConfusionMatrix skewed{3, 1, 1, 1};
  const auto w = prf_metrics(skewed, Averaging::Weighted);
  CHECK(w.recall == doctest::Approx((4 * 0.75 + 2 * 0.5) / 6));
  CHECK(w.precision == doctest::Approx((4 * 0.75 + 2 * 0.5) / 6));
}

TEST_CASE("perfect, all-wrong and zero-denominator cases") {
  for (auto a : kAllAveragings) {
    const auto prf = prf_metrics({5, 0, 0, 7}, a);
    CHECK(prf.precision == 1.0);
    CHECK(prf.recall == 1.0);
    CHECK(prf.f1 == 1.0);
  }
  CHECK(accuracy({5, 0, 0, 7}) == 1.0);
  CHECK(accuracy({0, 4, 3, 0}) == 0.0);
  const auto none = prf_metrics({0, 0, 4, 6}, Averaging::PositiveClass);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(prf_metrics({0, 0, 0, 6}, Averaging::PositiveClass).recall == 0.0);
}

TEST_CASE("averaging names") {
  for (auto a : kAllAveragings) CHECK(averaging_from_string(to_string(a)) == a);
  CHECK(to_string(Averaging::PositiveClass) == "positive_class");
  CHECK(kind_of([] { averaging_from_string("micro"); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("AUC worked examples") {
  const std::vector<Label> y = {P, P, N, N};
  CHECK(roc_auc(y, std::vector<double>{0.9, 0.4, 0.6, 0.2}) == 0.75);
  CHECK(roc_auc(y, std::vector<double>{4, 3, 2, 1}) == 1.0);
  CHECK(roc_auc(y, std::vector<double>{1, 2, 3, 4}) == 0.0);
  CHECK(roc_auc(y, std::vector<double>{7, 7, 7, 7}) == 0.5);
  CHECK(kind_of([] { roc_auc(std::vector<Label>{P, P}, std::vector<double>{1, 2}); }) == ErrorKind::SingleClass);
  CHECK(kind_of([&] { roc_auc(y, std::vector<double>{1}); }) == ErrorKind::LengthMismatch);
}

TEST_CASE("sorting AUC equals the pair-count oracle") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sample = random_sample(rng, 2 + rng.below(199), trial % 2 == 0);
    CHECK(std::abs(roc_auc(sample.y, sample.s) - pair_count_auc(sample.y, sample.s)) < 1e-12);
  }
}

TEST_CASE("AUC is invariant under increasing transforms") {
  SplitMix64 rng(78);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sample = random_sample(rng, 2 + rng.below(100), trial % 3 == 0);
    const double a = 0.1 + rng.uniform() * 3, b = rng.uniform() * 10 - 5;
    std::vector<double> mapped;
    for (double s : sample.s) mapped.push_back(std::exp(a * s) + b);
    CHECK(roc_auc(sample.y, mapped) == roc_auc(sample.y, sample.s));
  }
}

TEST_CASE("AUC of negated tie-free scores is the complement") {
  SplitMix64 rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sample = random_sample(rng, 2 + rng.below(100), false);
    std::vector<double> negated;
    for (double s : sample.s) negated.push_back(-s);
    CHECK(std::abs(roc_auc(sample.y, sample.s) + roc_auc(sample.y, negated) - 1.0) < 1e-12);
  }
}

TEST_CASE("F1 is the harmonic mean and accuracy follows the counts") {
  SplitMix64 rng(80);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cm = random_confusion(rng);
    CHECK(accuracy(cm) == static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total()));
    for (auto a : kAllAveragings) {
      const auto prf = prf_metrics(cm, a);
      for (double v : {prf.precision, prf.recall, prf.f1}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      if (a == Averaging::PositiveClass) {
        if (prf.precision + prf.recall == 0)
          CHECK(prf.f1 == 0.0);
        else
          CHECK(std::abs(prf.f1 - 2 * prf.precision * prf.recall / (prf.precision + prf.recall)) < 1e-12);
      }
    }
  }
}

TEST_CASE("macro equals weighted on balanced supports") {
  SplitMix64 rng(81);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t support = 1 + rng.below(30);
    const std::uint64_t tp = rng.below(support + 1), tn = rng.below(support + 1);
    const ConfusionMatrix cm{tp, support - tn, support - tp, tn};
    const auto m = prf_metrics(cm, Averaging::Macro);
    const auto w = prf_metrics(cm, Averaging::Weighted);
    CHECK(std::abs(m.precision - w.precision) < 1e-12);
    CHECK(std::abs(m.recall - w.recall) < 1e-12);
    CHECK(std::abs(m.f1 - w.f1) < 1e-12);
  }
}

TEST_CASE("constant-zero model") {
  classifiers::TrainedModel m;
  m.dimension = 2;
  m.params = classifiers::LinearModel{{0, 0}, 0};
  std::vector<FeatureVector> X(5, FeatureVector{{{0, 1.0}}, 2});
  const std::vector<Label> y = {P, N, N, P, N};
  const auto r = evaluate(m, X, y, Averaging::Weighted);
  CHECK(r.accuracy == 0.6);
  CHECK(r.auc == 0.5);
  CHECK(r.confusion == ConfusionMatrix{0, 0, 2, 3});
}

TEST_CASE("naive Bayes toy model evaluates perfectly on its training set") {
  const std::vector<FeatureVector> X = {FeatureVector{{{0, 2.0}}, 2}, FeatureVector{{{1, 2.0}}, 2}};
  const std::vector<Label> y = {P, N};
  const auto m = classifiers::fit_multinomial_nb(X, y, {});
  const auto r = evaluate(m, X, y, Averaging::Weighted);
  CHECK(r.accuracy == 1.0);
  CHECK(r.auc == 1.0);
  CHECK(r.f1 == 1.0);
}

TEST_CASE("evaluate_scores fills a consistent report") {
  SplitMix64 rng(82);
  for (int trial = 0; trial < 50; ++trial) {
    const auto sample = random_sample(rng, 2 + rng.below(60), trial % 2 == 0);
    for (auto a : kAllAveragings) {
      const auto r = evaluate_scores(sample.s, sample.y, a);
      CHECK(r.averaging == a);
      CHECK(r.confusion.total() == sample.y.size());
      CHECK(r.auc == roc_auc(sample.y, sample.s));
      CHECK(r.accuracy == accuracy(r.confusion));
      const auto& own = r.prf_by_averaging[static_cast<std::size_t>(a)];
      CHECK(r.precision == own.precision);
      CHECK(r.recall == own.recall);
      CHECK(r.f1 == own.f1);
      for (std::size_t k = 0; k < 3; ++k) {
        const auto expected = prf_metrics(r.confusion, kAllAveragings[k]);
        CHECK(r.prf_by_averaging[k].f1 == expected.f1);
      }
      if (r.precision + r.recall > 0 && a == Averaging::PositiveClass)
        CHECK(std::abs(r.f1 - 2 * r.precision * r.recall / (r.precision + r.recall)) < 1e-12);
    }
  }
}
