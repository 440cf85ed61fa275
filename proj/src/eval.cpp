#include "dtc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dtc/error.hpp"
#include "dtc/kernels.hpp"

namespace dtc::eval {
namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

Prf class_prf(double tp, double fp, double fn) {
  Prf p;
  p.precision = ratio(tp, tp + fp);
  p.recall = ratio(tp, tp + fn);
  p.f1 = ratio(2.0 * p.precision * p.recall, p.precision + p.recall);
  return p;
}

}  // namespace

std::string_view to_string(Averaging mode) {
  switch (mode) {
    case Averaging::PositiveClass: return "positive_class";
    case Averaging::Macro: return "macro";
    case Averaging::Weighted: return "weighted";
  }
  return "?";
}

Averaging averaging_from_string(std::string_view name) {
  for (Averaging a : kAllAveragings)
    if (to_string(a) == name) return a;
  throw Error(ErrorKind::InvalidConfig, "unknown averaging '" + std::string(name) + "' (positive_class|macro|weighted)");
}

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(y_true.size()) + " labels vs " + std::to_string(y_pred.size()) + " predictions");
  if (y_true.empty()) throw Error(ErrorKind::Empty, "no instances to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool pos_true = y_true[i] == Label::Deceptive;
    const bool pos_pred = y_pred[i] == Label::Deceptive;
    if (pos_true && pos_pred) ++cm.tp;
    else if (!pos_true && pos_pred) ++cm.fp;
    else if (pos_true) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

Prf prf_metrics(const ConfusionMatrix& cm, Averaging averaging) {
  const auto tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp);
  const auto fn = static_cast<double>(cm.fn), tn = static_cast<double>(cm.tn);
  const Prf pos = class_prf(tp, fp, fn);
  if (averaging == Averaging::PositiveClass) return pos;

  // Truthful as the positive class: its TP is tn, FP is fn, FN is fp.
  const Prf neg = class_prf(tn, fn, fp);
  double w_pos = 0.5, w_neg = 0.5;
  if (averaging == Averaging::Weighted) {
    const double total = tp + fp + fn + tn;
    w_pos = ratio(tp + fn, total);
    w_neg = ratio(tn + fp, total);
  }
  return {w_pos * pos.precision + w_neg * neg.precision, w_pos * pos.recall + w_neg * neg.recall,
          w_pos * pos.f1 + w_neg * neg.f1};
}

double accuracy(const ConfusionMatrix& cm) {
  return ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
}

double roc_auc(std::span<const Label> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(y_true.size()) + " labels vs " + std::to_string(scores.size()) + " scores");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based average ranks over the positives.
  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (y_true[order[k]] == Label::Deceptive) {
        pos_rank_sum += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorKind::SingleClass, "AUC needs both classes");
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

EvalReport evaluate_scores(std::span<const double> scores, std::span<const Label> y_test, Averaging averaging) {
  std::vector<Label> predicted;
  predicted.reserve(scores.size());
  for (double s : scores) predicted.push_back(classifiers::label_from_score(s));

  EvalReport report;
  report.averaging = averaging;
  report.confusion = confusion(y_test, predicted);
  report.accuracy = accuracy(report.confusion);
  for (std::size_t k = 0; k < kAllAveragings.size(); ++k)
    report.prf_by_averaging[k] = prf_metrics(report.confusion, kAllAveragings[k]);
  const Prf chosen = prf_metrics(report.confusion, averaging);
  report.precision = chosen.precision;
  report.recall = chosen.recall;
  report.f1 = chosen.f1;
  report.auc = roc_auc(y_test, scores);
  return report;
}

EvalReport evaluate(const classifiers::TrainedModel& model, std::span<const FeatureVector> X_test,
                    std::span<const Label> y_test, Averaging averaging) {
  if (X_test.size() != y_test.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(X_test.size()) + " vectors vs " + std::to_string(y_test.size()) + " labels");
  const auto scores = kernels::parallel::score_batch(model, X_test);
  EvalReport report = evaluate_scores(scores, y_test, averaging);
  report.model_name = std::string(classifiers::model_name(model.kind));
  return report;
}

}  // namespace dtc::eval
