#include "dtc/model_io.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include <zlib.h>

#include "dtc/error.hpp"
#include "dtc/io.hpp"
#include "dtc/kernels.hpp"

namespace dtc::model_io {
namespace {

using nlohmann::json;
using classifiers::ModelKind;

std::string crc32_hex(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

json sparse_to_json(const FeatureVector& v) {
  json idx = json::array(), val = json::array();
  for (const auto& e : v.entries) {
    idx.push_back(e.index);
    val.push_back(e.value);
  }
  return {{"dimension", v.dimension}, {"indices", idx}, {"values", val}};
}

FeatureVector sparse_from_json(const json& j) {
  FeatureVector v;
  v.dimension = j.at("dimension").get<std::size_t>();
  const auto idx = j.at("indices").get<std::vector<std::size_t>>();
  const auto val = j.at("values").get<std::vector<double>>();
  if (idx.size() != val.size()) throw Error(ErrorKind::CorruptFile, "support vector index/value lengths differ");
  for (std::size_t k = 0; k < idx.size(); ++k) v.entries.push_back({idx[k], val[k]});
  if (!is_canonical(v)) throw Error(ErrorKind::CorruptFile, "support vector is not canonical");
  return v;
}

json hyper_to_json(const classifiers::Hyperparams& h) {
  json j = {{"epochs", h.epochs},   {"learning_rate", h.learning_rate}, {"l2_lambda", h.l2_lambda},
            {"pa_C", h.pa_C},       {"nb_alpha", h.nb_alpha},           {"shuffle_seed", h.shuffle_seed}};
  j["rbf_gamma"] = h.rbf_gamma ? json(*h.rbf_gamma) : json(nullptr);
  return j;
}

classifiers::Hyperparams hyper_from_json(const json& j) {
  classifiers::Hyperparams h;
  h.epochs = j.at("epochs").get<int>();
  h.learning_rate = j.at("learning_rate").get<double>();
  h.l2_lambda = j.at("l2_lambda").get<double>();
  h.pa_C = j.at("pa_C").get<double>();
  h.nb_alpha = j.at("nb_alpha").get<double>();
  h.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
  if (!j.at("rbf_gamma").is_null()) h.rbf_gamma = j.at("rbf_gamma").get<double>();
  return h;
}

json model_to_json(const classifiers::TrainedModel& m) {
  json j = {{"kind", classifiers::model_name(m.kind)},
            {"dimension", m.dimension},
            {"feature_fingerprint", m.feature_fingerprint},
            {"hyperparams", hyper_to_json(m.hyperparams)}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, classifiers::LinearModel>) {
          j["weights"] = p.weights;
          j["bias"] = p.bias;
        } else if constexpr (std::is_same_v<P, classifiers::NaiveBayesModel>) {
          j["class_log_priors"] = p.class_log_priors;
          j["feature_log_likelihood"] = p.feature_log_likelihood;
        } else {
          json svs = json::array();
          for (const auto& sv : p.support_vectors) svs.push_back(sparse_to_json(sv));
          j["support_vectors"] = std::move(svs);
          j["dual_coeffs"] = p.dual_coeffs;
          j["bias"] = p.bias;
          j["gamma"] = p.gamma;
        }
      },
      m.params);
  return j;
}

classifiers::TrainedModel model_from_json(const json& j) {
  classifiers::TrainedModel m;
  m.kind = classifiers::model_kind_from_string(j.at("kind").get<std::string>());
  m.dimension = j.at("dimension").get<std::size_t>();
  m.feature_fingerprint = j.at("feature_fingerprint").get<std::string>();
  m.hyperparams = hyper_from_json(j.at("hyperparams"));
  switch (m.kind) {
    case ModelKind::Logistic:
    case ModelKind::LinearSvm:
    case ModelKind::PassiveAggressive: {
      classifiers::LinearModel p{j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>()};
      if (p.weights.size() != m.dimension) throw Error(ErrorKind::CorruptFile, "weight vector length != dimension");
      m.params = std::move(p);
      break;
    }
    case ModelKind::NaiveBayes: {
      classifiers::NaiveBayesModel p;
      p.class_log_priors = j.at("class_log_priors").get<std::array<double, 2>>();
      p.feature_log_likelihood = j.at("feature_log_likelihood").get<std::array<std::vector<double>, 2>>();
      for (const auto& row : p.feature_log_likelihood)
        if (row.size() != m.dimension) throw Error(ErrorKind::CorruptFile, "likelihood row length != dimension");
      m.params = std::move(p);
      break;
    }
    case ModelKind::KernelSvm: {
      classifiers::KernelModel p;
      for (const auto& sv : j.at("support_vectors")) p.support_vectors.push_back(sparse_from_json(sv));
      p.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      p.gamma = j.at("gamma").get<double>();
      if (p.support_vectors.size() != p.dual_coeffs.size() || p.support_vectors.empty())
        throw Error(ErrorKind::CorruptFile, "support vectors and coefficients misaligned");
      m.params = std::move(p);
      break;
    }
  }
  return m;
}

json vectorizer_config_to_json(const vectorizer::VectorizerConfig& c) {
  return {{"ngram_min", c.ngram_range.min_n},
          {"ngram_max", c.ngram_range.max_n},
          {"max_features", c.max_features},
          {"idf_mode", vectorizer::to_string(c.idf_mode)},
          {"l2_normalize", c.l2_normalize}};
}

vectorizer::VectorizerConfig vectorizer_config_from_json(const json& j) {
  vectorizer::VectorizerConfig c;
  c.ngram_range = {j.at("ngram_min").get<int>(), j.at("ngram_max").get<int>()};
  c.max_features = j.at("max_features").get<std::size_t>();
  c.idf_mode = vectorizer::idf_mode_from_string(j.at("idf_mode").get<std::string>());
  c.l2_normalize = j.at("l2_normalize").get<bool>();
  vectorizer::validate(c);
  return c;
}

json payload_to_json(const ModelBundle& b) {
  return {{"prep",
           {{"remove_stopwords", b.prep.remove_stopwords},
            {"lemmatize", b.prep.lemmatize},
            {"stopword_list_id", b.prep.stopword_list_id}}},
          {"vectorizer",
           {{"config", vectorizer_config_to_json(b.vectorizer_config)},
            {"terms", b.vocab.terms},
            {"df", b.idf.df},
            {"idf", b.idf.idf},
            {"n_docs", b.idf.n_docs},
            {"idf_mode", vectorizer::to_string(b.idf.mode)}}},
          {"training", {{"split_seed", b.split_seed}, {"train_fraction", b.train_fraction}}},
          {"model", model_to_json(b.model)}};
}

ModelBundle payload_from_json(const json& j) {
  ModelBundle b;
  const auto& prep = j.at("prep");
  b.prep.remove_stopwords = prep.at("remove_stopwords").get<bool>();
  b.prep.lemmatize = prep.at("lemmatize").get<bool>();
  b.prep.stopword_list_id = prep.at("stopword_list_id").get<std::string>();

  const auto& vec = j.at("vectorizer");
  b.vectorizer_config = vectorizer_config_from_json(vec.at("config"));
  b.vocab.terms = vec.at("terms").get<std::vector<std::string>>();
  b.vocab.ngram_range = b.vectorizer_config.ngram_range;
  b.vocab.max_features = b.vectorizer_config.max_features;
  b.vocab.reindex();
  b.idf.df = vec.at("df").get<std::vector<std::size_t>>();
  b.idf.idf = vec.at("idf").get<std::vector<double>>();
  b.idf.n_docs = vec.at("n_docs").get<std::size_t>();
  b.idf.mode = vectorizer::idf_mode_from_string(vec.at("idf_mode").get<std::string>());
  if (b.idf.df.size() != b.vocab.size() || b.idf.idf.size() != b.vocab.size() ||
      b.vocab.index.size() != b.vocab.size())
    throw Error(ErrorKind::CorruptFile, "vocabulary and idf table are misaligned");

  b.split_seed = j.at("training").at("split_seed").get<std::uint64_t>();
  b.train_fraction = j.at("training").at("train_fraction").get<double>();
  b.model = model_from_json(j.at("model"));
  if (b.model.dimension != b.vocab.size()) throw Error(ErrorKind::CorruptFile, "model dimension != vocabulary size");
  return b;
}

}  // namespace

std::string serialize(const ModelBundle& bundle) {
  const json payload = payload_to_json(bundle);
  const json file = {{"format_version", kFormatVersion}, {"checksum", crc32_hex(payload.dump())}, {"payload", payload}};
  return file.dump() + "\n";
}

ModelBundle deserialize(std::string_view text) {
  json file;
  try {
    file = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    const int version = file.at("format_version").get<int>();
    if (version != kFormatVersion)
      throw Error(ErrorKind::UnsupportedVersion, "model format_version " + std::to_string(version) + " (supported: " +
                                                     std::to_string(kFormatVersion) + ")");
    const auto& payload = file.at("payload");
    if (crc32_hex(payload.dump()) != file.at("checksum").get<std::string>())
      throw Error(ErrorKind::CorruptFile, "checksum mismatch");
    return payload_from_json(payload);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("model file field error: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig) throw Error(ErrorKind::CorruptFile, e.what());
    throw;
  }
}

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize(bundle));
}

ModelBundle load_model(const std::filesystem::path& path) { return deserialize(io::read_file(path)); }

std::vector<Prediction> predict_texts(const ModelBundle& bundle, const std::vector<std::string>& texts) {
  const auto docs = kernels::parallel::preprocess_corpus(texts, bundle.prep);
  const auto X = vectorizer::transform_corpus(docs, bundle.vocab, bundle.idf, bundle.vectorizer_config);
  const auto scores = kernels::parallel::score_batch(bundle.model, X);
  std::vector<Prediction> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back({s, classifiers::label_from_score(s)});
  return out;
}

std::string predict_file(const std::filesystem::path& model_path, const std::filesystem::path& input_path) {
  const ModelBundle bundle = load_model(model_path);
  const std::string content = io::read_file(input_path);
  std::vector<std::string> lines;
  std::istringstream in(content);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  std::ostringstream out;
  out.precision(17);
  for (const auto& p : predict_texts(bundle, lines)) out << p.score << '\t' << label_name(p.label) << '\n';
  return std::move(out).str();
}

}  // namespace dtc::model_io
