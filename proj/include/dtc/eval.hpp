#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dtc/classifiers.hpp"
#include "dtc/label.hpp"
#include "dtc/vectorizer.hpp"

namespace dtc::eval {

/// Positive class is Deceptive.
struct ConfusionMatrix {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

enum class Averaging { PositiveClass, Macro, Weighted };

inline constexpr std::array<Averaging, 3> kAllAveragings = {Averaging::PositiveClass, Averaging::Macro,
                                                            Averaging::Weighted};

std::string_view to_string(Averaging mode);
Averaging averaging_from_string(std::string_view name);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

/// Zero denominators yield 0 for the affected quantity; F1 is 0 when P + R = 0.
Prf prf_metrics(const ConfusionMatrix& cm, Averaging averaging);
double accuracy(const ConfusionMatrix& cm);

/// Probability that a random positive outranks a random negative, ties
/// counting one half. Computed from average ranks in O(n log n).
double roc_auc(std::span<const Label> y_true, std::span<const double> scores);

struct EvalReport {
  std::string model_name;
  vectorizer::VectorizerConfig feature_config{};
  Averaging averaging = Averaging::Weighted;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  ConfusionMatrix confusion{};
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
  std::int64_t runtime_ms = 0;
  std::array<Prf, 3> prf_by_averaging{};  // indexed like kAllAveragings
};

/// Scores every instance once (in parallel), predicts with the sign rule and
/// fills every report field except split metadata and runtime.
EvalReport evaluate(const classifiers::TrainedModel& model, std::span<const FeatureVector> X_test,
                    std::span<const Label> y_test, Averaging averaging);

/// Same, from precomputed decision scores.
EvalReport evaluate_scores(std::span<const double> scores, std::span<const Label> y_test, Averaging averaging);

}  // namespace dtc::eval
