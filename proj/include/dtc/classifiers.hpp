#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dtc/label.hpp"
#include "dtc/sparse.hpp"

namespace dtc::classifiers {

enum class ModelKind { Logistic, LinearSvm, PassiveAggressive, NaiveBayes, KernelSvm };

inline constexpr std::array<ModelKind, 5> kAllModelKinds = {ModelKind::Logistic, ModelKind::LinearSvm,
                                                            ModelKind::PassiveAggressive, ModelKind::NaiveBayes,
                                                            ModelKind::KernelSvm};

/// Report names: LR, LSVM, PA, NB, SVM.
std::string_view model_name(ModelKind kind);
/// Accepts the report names case-insensitively.
ModelKind model_kind_from_string(std::string_view name);

struct Hyperparams {
  int epochs = 50;
  double learning_rate = 0.1;  // logistic regression
  double l2_lambda = 1e-4;     // LR and both SVMs
  double pa_C = 1.0;
  double nb_alpha = 1.0;
  std::optional<double> rbf_gamma;  // unset: 1 / (dimension * variance of the training matrix)
  std::uint64_t shuffle_seed = 42;

  bool operator==(const Hyperparams&) const = default;
};

void validate(const Hyperparams& h);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
};

struct NaiveBayesModel {
  // Index 0 is Deceptive, 1 is Truthful.
  std::array<double, 2> class_log_priors{};
  std::array<std::vector<double>, 2> feature_log_likelihood;
};

struct KernelModel {
  std::vector<FeatureVector> support_vectors;
  std::vector<double> dual_coeffs;  // signed
  double bias = 0.0;
  double gamma = 1.0;
};

struct TrainedModel {
  ModelKind kind = ModelKind::Logistic;
  std::size_t dimension = 0;
  Hyperparams hyperparams{};
  std::string feature_fingerprint;
  std::variant<LinearModel, NaiveBayesModel, KernelModel> params;
};

using Dataset = std::span<const FeatureVector>;
using Labels = std::span<const Label>;

/// Full-batch gradient descent on mean log-loss + (lambda/2)|w|^2 from w = 0, b = 0.
TrainedModel fit_logistic(Dataset X, Labels y, const Hyperparams& h);

/// Pegasos: stochastic subgradient on (lambda/2)|(w,b)|^2 + mean hinge loss with
/// step 1/(lambda t). The bias is an augmented constant-1 feature.
TrainedModel fit_linear_svm(Dataset X, Labels y, const Hyperparams& h);

/// Online PA-I with the bias as an implicit always-1 feature.
TrainedModel fit_passive_aggressive(Dataset X, Labels y, const Hyperparams& h);

/// Multinomial naive Bayes with additive smoothing over (fractional) counts.
TrainedModel fit_multinomial_nb(Dataset X, Labels y, const Hyperparams& h);

/// Kernelized Pegasos with RBF kernel exp(-gamma |u-v|^2) + 1 (the +1 plays
/// the role of the bias feature).
TrainedModel fit_kernel_svm(Dataset X, Labels y, const Hyperparams& h);

TrainedModel fit(ModelKind kind, Dataset X, Labels y, const Hyperparams& h);

double rbf_kernel(const FeatureVector& u, const FeatureVector& v, double gamma);

/// Positive means Deceptive. Throws DimensionMismatch.
double decision_score(const TrainedModel& model, const FeatureVector& x);

/// Deceptive iff score > 0; an exact 0 is Truthful.
constexpr Label label_from_score(double score) noexcept { return score > 0.0 ? Label::Deceptive : Label::Truthful; }
Label predict(const TrainedModel& model, const FeatureVector& x);

namespace detail {

double logistic_objective(Dataset X, Labels y, std::span<const double> w, double b, double lambda);
/// Returns the gradient with respect to (w, b); the last element is d/db.
std::vector<double> logistic_gradient(Dataset X, Labels y, std::span<const double> w, double b, double lambda);

/// One PA-I step; returns tau. Skips (returns 0) when |x| = 0.
double passive_aggressive_step(std::span<double> w, double& b, const FeatureVector& x, double y, double C);

/// Pegasos state with w = scale * v so the shrink step is O(1).
class PegasosState {
 public:
  PegasosState(std::size_t dimension, double lambda);
  void step(const FeatureVector& x, double y);
  double score(const FeatureVector& x) const;
  LinearModel model() const;

 private:
  std::vector<double> v_;
  double v_bias_ = 0.0;
  double scale_ = 1.0;
  double lambda_;
  std::uint64_t t_ = 0;
};

}  // namespace detail
}  // namespace dtc::classifiers
