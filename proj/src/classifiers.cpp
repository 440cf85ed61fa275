#include "dtc/classifiers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "dtc/error.hpp"
#include "dtc/kernels.hpp"
#include "dtc/splitmix.hpp"

namespace dtc::classifiers {
namespace {

std::size_t check_training_set(Dataset X, Labels y) {
  if (X.size() != y.size())
    throw Error(ErrorKind::LengthMismatch, std::to_string(X.size()) + " vectors vs " + std::to_string(y.size()) + " labels");
  if (X.size() < 2) throw Error(ErrorKind::SingleClass, "need at least two training examples");
  const bool has_pos = std::find(y.begin(), y.end(), Label::Deceptive) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), Label::Truthful) != y.end();
  if (!has_pos || !has_neg) throw Error(ErrorKind::SingleClass, "training labels contain a single class");
  const std::size_t dim = X.front().dimension;
  for (const auto& x : X)
    if (x.dimension != dim) throw Error(ErrorKind::DimensionMismatch, "training vectors have differing dimensions");
  return dim;
}

TrainedModel make_model(ModelKind kind, std::size_t dim, const Hyperparams& h) {
  TrainedModel m;
  m.kind = kind;
  m.dimension = dim;
  m.hyperparams = h;
  return m;
}

// Stable log(1 + exp(-m)).
double log1p_exp_neg(double m) { return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

// 1 / (1 + exp(m)), i.e. sigma(-m).
double sigmoid_neg(double m) {
  if (m >= 0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

class EpochOrder {
 public:
  EpochOrder(std::size_t n, std::uint64_t seed) : order_(n), rng_(seed) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }
  const std::vector<std::size_t>& next_epoch() {
    fisher_yates(std::span<std::size_t>(order_), rng_);
    return order_;
  }

 private:
  std::vector<std::size_t> order_;
  SplitMix64 rng_;
};

// 1 / (dimension * Var(X)) over every entry of X viewed as a dense matrix;
// 1 / dimension when that variance is zero.
double default_gamma(Dataset X, std::size_t dim) {
  if (dim == 0) return 1.0;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& x : X)
    for (const auto& e : x.entries) {
      sum += e.value;
      sum_sq += e.value * e.value;
    }
  const double cells = static_cast<double>(X.size()) * static_cast<double>(dim);
  const double mean = sum / cells;
  const double var = sum_sq / cells - mean * mean;
  const double d = static_cast<double>(dim);
  return var > 0.0 ? 1.0 / (d * var) : 1.0 / d;
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Logistic: return "LR";
    case ModelKind::LinearSvm: return "LSVM";
    case ModelKind::PassiveAggressive: return "PA";
    case ModelKind::NaiveBayes: return "NB";
    case ModelKind::KernelSvm: return "SVM";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (ModelKind kind : kAllModelKinds)
    if (model_name(kind) == upper) return kind;
  throw Error(ErrorKind::InvalidConfig, "unknown model '" + std::string(name) + "' (LR|LSVM|PA|NB|SVM)");
}

void validate(const Hyperparams& h) {
  if (h.epochs < 1) throw Error(ErrorKind::InvalidConfig, "epochs must be >= 1");
  if (!(h.learning_rate > 0)) throw Error(ErrorKind::InvalidConfig, "learning_rate must be > 0");
  if (!(h.l2_lambda >= 0)) throw Error(ErrorKind::InvalidConfig, "l2_lambda must be >= 0");
  if (!(h.pa_C > 0)) throw Error(ErrorKind::InvalidConfig, "pa_C must be > 0");
  if (!(h.nb_alpha > 0)) throw Error(ErrorKind::InvalidConfig, "nb_alpha must be > 0");
  if (h.rbf_gamma && !(*h.rbf_gamma > 0)) throw Error(ErrorKind::InvalidConfig, "rbf_gamma must be > 0");
}

namespace detail {

double logistic_objective(Dataset X, Labels y, std::span<const double> w, double b, double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += log1p_exp_neg(sign_of(y[i]) * (dot(w, X[i]) + b));
  double reg = 0.0;
  for (double wj : w) reg += wj * wj;
  return loss / static_cast<double>(X.size()) + 0.5 * lambda * reg;
}

std::vector<double> logistic_gradient(Dataset X, Labels y, std::span<const double> w, double b, double lambda) {
  const std::size_t dim = w.size();
  std::vector<double> grad(dim + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double yi = sign_of(y[i]);
    const double coeff = -yi * sigmoid_neg(yi * (dot(w, X[i]) + b)) * inv_n;
    for (const auto& e : X[i].entries) grad[e.index] += coeff * e.value;
    grad[dim] += coeff;
  }
  for (std::size_t j = 0; j < dim; ++j) grad[j] += lambda * w[j];
  return grad;
}

double passive_aggressive_step(std::span<double> w, double& b, const FeatureVector& x, double y, double C) {
  const double sq = squared_norm(x);
  if (sq == 0.0) return 0.0;
  const double loss = std::max(0.0, 1.0 - y * (dot(w, x) + b));
  if (loss == 0.0) return 0.0;
  const double tau = std::min(C, loss / (sq + 1.0));
  for (const auto& e : x.entries) w[e.index] += tau * y * e.value;
  b += tau * y;
  return tau;
}

PegasosState::PegasosState(std::size_t dimension, double lambda) : v_(dimension, 0.0), lambda_(lambda) {}

double PegasosState::score(const FeatureVector& x) const { return scale_ * (dot(v_, x) + v_bias_); }

void PegasosState::step(const FeatureVector& x, double y) {
  ++t_;
  const double eta = 1.0 / (lambda_ * static_cast<double>(t_));
  const bool violated = y * score(x) < 1.0;
  scale_ *= 1.0 - eta * lambda_;
  if (scale_ <= 0.0) {
    std::fill(v_.begin(), v_.end(), 0.0);
    v_bias_ = 0.0;
    scale_ = 1.0;
  }
  if (violated) {
    const double c = eta * y / scale_;
    for (const auto& e : x.entries) v_[e.index] += c * e.value;
    v_bias_ += c;
  }
}

LinearModel PegasosState::model() const {
  LinearModel m;
  m.weights.resize(v_.size());
  for (std::size_t j = 0; j < v_.size(); ++j) m.weights[j] = scale_ * v_[j];
  m.bias = scale_ * v_bias_;
  return m;
}

}  // namespace detail

TrainedModel fit_logistic(Dataset X, Labels y, const Hyperparams& h) {
  validate(h);
  const std::size_t dim = check_training_set(X, y);
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  for (int epoch = 0; epoch < h.epochs; ++epoch) {
    const auto grad = detail::logistic_gradient(X, y, w, b, h.l2_lambda);
    for (std::size_t j = 0; j < dim; ++j) w[j] -= h.learning_rate * grad[j];
    b -= h.learning_rate * grad[dim];
  }
  auto m = make_model(ModelKind::Logistic, dim, h);
  m.params = LinearModel{std::move(w), b};
  return m;
}

TrainedModel fit_linear_svm(Dataset X, Labels y, const Hyperparams& h) {
  validate(h);
  if (!(h.l2_lambda > 0)) throw Error(ErrorKind::InvalidConfig, "linear SVM needs l2_lambda > 0");
  const std::size_t dim = check_training_set(X, y);
  detail::PegasosState state(dim, h.l2_lambda);
  EpochOrder order(X.size(), h.shuffle_seed);
  for (int epoch = 0; epoch < h.epochs; ++epoch)
    for (std::size_t i : order.next_epoch()) state.step(X[i], sign_of(y[i]));
  auto m = make_model(ModelKind::LinearSvm, dim, h);
  m.params = state.model();
  return m;
}

TrainedModel fit_passive_aggressive(Dataset X, Labels y, const Hyperparams& h) {
  validate(h);
  const std::size_t dim = check_training_set(X, y);
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  EpochOrder order(X.size(), h.shuffle_seed);
  for (int epoch = 0; epoch < h.epochs; ++epoch)
    for (std::size_t i : order.next_epoch()) detail::passive_aggressive_step(w, b, X[i], sign_of(y[i]), h.pa_C);
  auto m = make_model(ModelKind::PassiveAggressive, dim, h);
  m.params = LinearModel{std::move(w), b};
  return m;
}

TrainedModel fit_multinomial_nb(Dataset X, Labels y, const Hyperparams& h) {
  validate(h);
  const std::size_t dim = check_training_set(X, y);
  std::array<std::vector<double>, 2> feature_sum{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  std::array<double, 2> class_count{};
  for (std::size_t i = 0; i < X.size(); ++i) {
    const std::size_t c = y[i] == Label::Deceptive ? 0 : 1;
    class_count[c] += 1.0;
    for (const auto& e : X[i].entries) {
      if (e.value < 0) throw Error(ErrorKind::NegativeFeature, "example " + std::to_string(i) + " has a negative weight");
      feature_sum[c][e.index] += e.value;
    }
  }
  NaiveBayesModel nb;
  const double total = class_count[0] + class_count[1];
  for (std::size_t c = 0; c < 2; ++c) {
    nb.class_log_priors[c] = std::log(class_count[c] / total);
    double class_total = 0.0;
    for (double v : feature_sum[c]) class_total += v;
    const double denom = h.nb_alpha * static_cast<double>(dim) + class_total;
    nb.feature_log_likelihood[c].resize(dim);
    for (std::size_t j = 0; j < dim; ++j)
      nb.feature_log_likelihood[c][j] = std::log((h.nb_alpha + feature_sum[c][j]) / denom);
  }
  auto m = make_model(ModelKind::NaiveBayes, dim, h);
  m.params = std::move(nb);
  return m;
}

TrainedModel fit_kernel_svm(Dataset X, Labels y, const Hyperparams& h) {
  validate(h);
  if (!(h.l2_lambda > 0)) throw Error(ErrorKind::InvalidConfig, "kernel SVM needs l2_lambda > 0");
  const std::size_t dim = check_training_set(X, y);
  const double gamma = h.rbf_gamma ? *h.rbf_gamma : default_gamma(X, dim);
  const std::size_t n = X.size();
  const std::vector<double> gram = kernels::parallel::rbf_gram(X, gamma);

  // margin_sum[k] = sum_j alpha_j y_j (K(j,k) + 1)
  std::vector<double> margin_sum(n, 0.0);
  std::vector<std::uint64_t> alpha(n, 0);
  EpochOrder order(n, h.shuffle_seed);
  std::uint64_t t = 0;
  for (int epoch = 0; epoch < h.epochs; ++epoch) {
    for (std::size_t i : order.next_epoch()) {
      ++t;
      const double yi = sign_of(y[i]);
      if (yi * margin_sum[i] / (h.l2_lambda * static_cast<double>(t)) < 1.0) {
        ++alpha[i];
        const double* row = gram.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) margin_sum[k] += yi * (row[k] + 1.0);
      }
    }
  }

  KernelModel km;
  km.gamma = gamma;
  const double scale = 1.0 / (h.l2_lambda * static_cast<double>(t));
  for (std::size_t j = 0; j < n; ++j) {
    if (alpha[j] == 0) continue;
    km.support_vectors.push_back(X[j]);
    km.dual_coeffs.push_back(sign_of(y[j]) * static_cast<double>(alpha[j]) * scale);
  }
  for (double c : km.dual_coeffs) km.bias += c;
  auto m = make_model(ModelKind::KernelSvm, dim, h);
  m.params = std::move(km);
  return m;
}

TrainedModel fit(ModelKind kind, Dataset X, Labels y, const Hyperparams& h) {
  switch (kind) {
    case ModelKind::Logistic: return fit_logistic(X, y, h);
    case ModelKind::LinearSvm: return fit_linear_svm(X, y, h);
    case ModelKind::PassiveAggressive: return fit_passive_aggressive(X, y, h);
    case ModelKind::NaiveBayes: return fit_multinomial_nb(X, y, h);
    case ModelKind::KernelSvm: return fit_kernel_svm(X, y, h);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown model kind");
}

double rbf_kernel(const FeatureVector& u, const FeatureVector& v, double gamma) {
  return std::exp(-gamma * squared_distance(u, v));
}

double decision_score(const TrainedModel& model, const FeatureVector& x) {
  if (x.dimension != model.dimension)
    throw Error(ErrorKind::DimensionMismatch, "vector dimension " + std::to_string(x.dimension) + " vs model dimension " +
                                                  std::to_string(model.dimension));
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LinearModel>) {
          return dot(p.weights, x) + p.bias;
        } else if constexpr (std::is_same_v<P, NaiveBayesModel>) {
          return (p.class_log_priors[0] + dot(p.feature_log_likelihood[0], x)) -
                 (p.class_log_priors[1] + dot(p.feature_log_likelihood[1], x));
        } else {
          double s = 0.0;
          for (std::size_t j = 0; j < p.support_vectors.size(); ++j)
            s += p.dual_coeffs[j] * rbf_kernel(p.support_vectors[j], x, p.gamma);
          return s + p.bias;
        }
      },
      model.params);
}

Label predict(const TrainedModel& model, const FeatureVector& x) { return label_from_score(decision_score(model, x)); }

}  // namespace dtc::classifiers
