#include "dtc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dtc/csv.hpp"
#include "dtc/error.hpp"
#include "dtc/io.hpp"
#include "dtc/kernels.hpp"

namespace dtc::experiment {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using classifiers::ModelKind;

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); }

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, std::string_view where) {
  if (!j.is_object()) bad_config(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      bad_config("unknown key '" + key + "' in " + std::string(where));
}

template <typename T>
void read_opt(const json& j, std::string_view key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

ModelSpec model_from_json(const json& j) {
  ModelSpec spec;
  if (j.is_string()) {
    spec.kind = classifiers::model_kind_from_string(j.get<std::string>());
    return spec;
  }
  reject_unknown(j, {"name", "epochs", "learning_rate", "l2_lambda", "pa_C", "nb_alpha", "rbf_gamma", "shuffle_seed"},
                 "models[]");
  spec.kind = classifiers::model_kind_from_string(j.at("name").get<std::string>());
  auto& h = spec.hyperparams;
  read_opt(j, "epochs", h.epochs);
  read_opt(j, "learning_rate", h.learning_rate);
  read_opt(j, "l2_lambda", h.l2_lambda);
  read_opt(j, "pa_C", h.pa_C);
  read_opt(j, "nb_alpha", h.nb_alpha);
  read_opt(j, "shuffle_seed", h.shuffle_seed);
  if (j.contains("rbf_gamma") && !j.at("rbf_gamma").is_null()) h.rbf_gamma = j.at("rbf_gamma").get<double>();
  return spec;
}

ordered_json model_to_json(const ModelSpec& m) {
  const auto& h = m.hyperparams;
  ordered_json j;
  j["name"] = classifiers::model_name(m.kind);
  j["epochs"] = h.epochs;
  j["learning_rate"] = h.learning_rate;
  j["l2_lambda"] = h.l2_lambda;
  j["pa_C"] = h.pa_C;
  j["nb_alpha"] = h.nb_alpha;
  j["rbf_gamma"] = h.rbf_gamma ? ordered_json(*h.rbf_gamma) : ordered_json(nullptr);
  j["shuffle_seed"] = h.shuffle_seed;
  return j;
}

ordered_json vectorizer_json(const vectorizer::VectorizerConfig& v) {
  ordered_json j;
  j["ngram_min"] = v.ngram_range.min_n;
  j["ngram_max"] = v.ngram_range.max_n;
  j["max_features"] = v.max_features;
  j["idf_mode"] = vectorizer::to_string(v.idf_mode);
  j["l2_normalize"] = v.l2_normalize;
  return j;
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["dataset"] = c.dataset_path.string();
  j["prep"] = {{"remove_stopwords", c.prep.remove_stopwords},
               {"lemmatize", c.prep.lemmatize},
               {"stopword_list", c.prep.stopword_list_id}};
  j["vectorizer"] = vectorizer_json(c.vectorizer);
  j["models"] = ordered_json::array();
  for (const auto& m : c.models) j["models"].push_back(model_to_json(m));
  j["split"] = {{"train_fraction", c.train_fraction}, {"seeds", c.seeds}};
  j["averaging"] = eval::to_string(c.averaging);
  j["output_dir"] = c.output_dir.string();
  j["record_runtime"] = c.record_runtime;
  ordered_json ranges = ordered_json::array();
  for (const auto& r : c.grid.ngram_ranges) ranges.push_back({r.min_n, r.max_n});
  j["grid"] = {{"ngram_ranges", ranges}, {"max_features", c.grid.max_features}};
  return j;
}

std::string stage_message(std::string_view stage, std::uint64_t seed, const std::exception& e) {
  return "stage '" + std::string(stage) + "' (seed " + std::to_string(seed) + "): " + e.what();
}

template <typename F>
auto in_stage(std::string_view stage, std::uint64_t seed, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), stage_message(stage, seed, e));
  }
}

std::vector<Label> labels_of(const Corpus& corpus, const std::vector<std::size_t>& ids) {
  std::vector<Label> out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(corpus.reviews[id].label);
  return out;
}

std::vector<textprep::TokenSequence> docs_of(const std::vector<textprep::TokenSequence>& prepped,
                                             const std::vector<std::size_t>& ids) {
  std::vector<textprep::TokenSequence> out;
  out.reserve(ids.size());
  for (std::size_t id : ids) out.push_back(prepped[id]);
  return out;
}

}  // namespace

std::vector<ModelSpec> all_models() {
  std::vector<ModelSpec> out;
  for (ModelKind kind : classifiers::kAllModelKinds) out.push_back({kind, {}});
  return out;
}

void validate(const ExperimentConfig& config) {
  if (config.models.empty()) bad_config("at least one model is required");
  if (config.seeds.empty()) bad_config("at least one seed is required");
  std::set<ModelKind> kinds;
  for (const auto& m : config.models) {
    if (!kinds.insert(m.kind).second) bad_config("model " + std::string(classifiers::model_name(m.kind)) + " listed twice");
    classifiers::validate(m.hyperparams);
  }
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) bad_config("train_fraction must lie in (0,1)");
  vectorizer::validate(config.vectorizer);
  textprep::stopword_set(config.prep.stopword_list_id);
  for (const auto& r : config.grid.ngram_ranges) {
    auto v = config.vectorizer;
    v.ngram_range = r;
    vectorizer::validate(v);
  }
  for (std::size_t mf : config.grid.max_features)
    if (mf < 1) bad_config("grid max_features must be >= 1");
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad_config(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    reject_unknown(j, {"dataset", "prep", "vectorizer", "models", "split", "averaging", "output_dir", "record_runtime", "grid"},
                   "config");
    if (j.contains("dataset")) c.dataset_path = j.at("dataset").get<std::string>();
    if (j.contains("prep")) {
      const auto& p = j.at("prep");
      reject_unknown(p, {"remove_stopwords", "lemmatize", "stopword_list"}, "prep");
      read_opt(p, "remove_stopwords", c.prep.remove_stopwords);
      read_opt(p, "lemmatize", c.prep.lemmatize);
      read_opt(p, "stopword_list", c.prep.stopword_list_id);
    }
    if (j.contains("vectorizer")) {
      const auto& v = j.at("vectorizer");
      reject_unknown(v, {"ngram_min", "ngram_max", "max_features", "idf_mode", "l2_normalize"}, "vectorizer");
      read_opt(v, "ngram_min", c.vectorizer.ngram_range.min_n);
      read_opt(v, "ngram_max", c.vectorizer.ngram_range.max_n);
      read_opt(v, "max_features", c.vectorizer.max_features);
      if (v.contains("idf_mode")) c.vectorizer.idf_mode = vectorizer::idf_mode_from_string(v.at("idf_mode").get<std::string>());
      read_opt(v, "l2_normalize", c.vectorizer.l2_normalize);
    }
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) c.models.push_back(model_from_json(m));
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      reject_unknown(s, {"train_fraction", "seeds"}, "split");
      read_opt(s, "train_fraction", c.train_fraction);
      read_opt(s, "seeds", c.seeds);
    }
    if (j.contains("averaging")) c.averaging = eval::averaging_from_string(j.at("averaging").get<std::string>());
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    read_opt(j, "record_runtime", c.record_runtime);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown(g, {"ngram_ranges", "max_features"}, "grid");
      if (g.contains("ngram_ranges")) {
        c.grid.ngram_ranges.clear();
        for (const auto& r : g.at("ngram_ranges")) {
          const auto pair = r.get<std::vector<int>>();
          if (pair.size() != 2) bad_config("grid ngram range must be [min, max]");
          c.grid.ngram_ranges.push_back({pair[0], pair[1]});
        }
      }
      read_opt(g, "max_features", c.grid.max_features);
    }
  } catch (const json::exception& e) {
    bad_config(std::string("config field error: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return config_from_json(io::read_file(path)); }

std::string config_to_json(const ExperimentConfig& config) { return config_json(config).dump(2) + "\n"; }

std::vector<report::MetricsRecord> RunBundle::records() const {
  std::vector<report::MetricsRecord> out;
  out.reserve(reports.size());
  for (const auto& r : reports) out.push_back(report::to_record(r));
  return out;
}

std::vector<eval::EvalReport> run_seed(const ExperimentConfig& config, const Corpus& corpus,
                                       const std::vector<textprep::TokenSequence>& prepped, std::uint64_t seed) {
  const auto manifest = in_stage("split", seed, [&] { return stratified_split(corpus, config.train_fraction, seed); });
  const auto train_docs = docs_of(prepped, manifest.train_ids);
  const auto test_docs = docs_of(prepped, manifest.test_ids);
  const auto y_train = labels_of(corpus, manifest.train_ids);
  const auto y_test = labels_of(corpus, manifest.test_ids);

  // The vocabulary and IDF table see the training documents only.
  const auto fitted = in_stage("fit vocabulary", seed, [&] { return vectorizer::fit_vocabulary(train_docs, config.vectorizer); });
  const auto X_train = vectorizer::transform_corpus(train_docs, fitted.vocab, fitted.idf, config.vectorizer);
  const auto X_test = vectorizer::transform_corpus(test_docs, fitted.vocab, fitted.idf, config.vectorizer);

  std::vector<eval::EvalReport> reports;
  for (const auto& spec : config.models) {
    const std::string name(classifiers::model_name(spec.kind));
    const auto start = std::chrono::steady_clock::now();
    auto model = in_stage("fit " + name, seed, [&] { return classifiers::fit(spec.kind, X_train, y_train, spec.hyperparams); });
    model.feature_fingerprint = vectorizer::fingerprint(config.vectorizer);
    auto rep = in_stage("evaluate " + name, seed, [&] { return eval::evaluate(model, X_test, y_test, config.averaging); });
    const auto elapsed = std::chrono::steady_clock::now() - start;
    rep.feature_config = config.vectorizer;
    rep.split_seed = seed;
    rep.train_fraction = config.train_fraction;
    rep.runtime_ms =
        config.record_runtime ? std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() : 0;
    reports.push_back(std::move(rep));
  }
  return reports;
}

RunBundle run_experiment(const ExperimentConfig& config, const Corpus& corpus) {
  validate(config);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (corpus.reviews[i].id != i) bad_config("corpus ids must equal row positions");
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& r : corpus.reviews) texts.push_back(r.text);
  // Preprocessing is stateless, so it runs once for all seeds. Review ids are
  // row positions, which index `prepped` directly.
  const auto prepped = kernels::parallel::preprocess_corpus(texts, config.prep);

  RunBundle bundle;
  bundle.config = config;
  for (std::uint64_t seed : config.seeds) {
    auto reports = run_seed(config, corpus, prepped, seed);
    bundle.reports.insert(bundle.reports.end(), std::make_move_iterator(reports.begin()),
                          std::make_move_iterator(reports.end()));
  }
  bundle.aggregates = report::aggregate(bundle.records());
  return bundle;
}

RunBundle run_experiment(const ExperimentConfig& config) {
  validate(config);
  const Corpus corpus = in_stage("load dataset", 0, [&] { return load_corpus(config.dataset_path); });
  return run_experiment(config, corpus);
}

std::string bundle_to_json(const RunBundle& bundle) {
  ordered_json j;
  j["config"] = config_json(bundle.config);
  j["records"] = ordered_json::array();
  for (const auto& r : bundle.reports) {
    ordered_json rec = ordered_json::parse(report::to_json(report::to_record(r)));
    ordered_json prf;
    for (std::size_t k = 0; k < eval::kAllAveragings.size(); ++k) {
      const auto& p = r.prf_by_averaging[k];
      prf[std::string(eval::to_string(eval::kAllAveragings[k]))] = {
          {"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
    }
    j["records"].push_back({{"metrics", rec}, {"prf_by_averaging", prf}});
  }
  j["aggregates"] = ordered_json::array();
  for (const auto& a : bundle.aggregates) {
    ordered_json mean, sd;
    for (std::size_t m = 0; m < report::kMetricNames.size(); ++m) {
      mean[std::string(report::kMetricNames[m])] = a.mean[m];
      sd[std::string(report::kMetricNames[m])] = a.stddev[m];
    }
    j["aggregates"].push_back({{"family", a.family}, {"model", a.model}, {"n", a.n}, {"mean", mean}, {"stddev", sd}});
  }
  return j.dump(2) + "\n";
}

void write_run_outputs(const RunBundle& bundle, const std::filesystem::path& dir) {
  const auto records = bundle.records();
  io::write_file_atomic(dir / "metrics.json", report::emit(records, report::Format::MetricsJson));
  io::write_file_atomic(dir / "table.csv", report::emit(records, report::Format::TableCsv));
  io::write_file_atomic(dir / "figure.csv", report::emit(records, report::Format::FigureCsv));
  io::write_file_atomic(dir / "bundle.json", bundle_to_json(bundle));
}

model_io::ModelBundle train_bundle(const ExperimentConfig& config, const Corpus& corpus, const ModelSpec& spec,
                                   std::uint64_t seed) {
  validate(config);
  const auto manifest = in_stage("split", seed, [&] { return stratified_split(corpus, config.train_fraction, seed); });
  std::vector<std::string> texts;
  for (std::size_t id : manifest.train_ids) texts.push_back(corpus.reviews[id].text);
  const auto docs = kernels::parallel::preprocess_corpus(texts, config.prep);
  const auto y = labels_of(corpus, manifest.train_ids);

  model_io::ModelBundle bundle;
  auto fitted = in_stage("fit vocabulary", seed, [&] { return vectorizer::fit_vocabulary(docs, config.vectorizer); });
  const auto X = vectorizer::transform_corpus(docs, fitted.vocab, fitted.idf, config.vectorizer);
  const std::string name(classifiers::model_name(spec.kind));
  bundle.model = in_stage("fit " + name, seed, [&] { return classifiers::fit(spec.kind, X, y, spec.hyperparams); });
  bundle.model.feature_fingerprint = vectorizer::fingerprint(config.vectorizer);
  bundle.vectorizer_config = config.vectorizer;
  bundle.vocab = std::move(fitted.vocab);
  bundle.idf = std::move(fitted.idf);
  bundle.prep = config.prep;
  bundle.split_seed = seed;
  bundle.train_fraction = config.train_fraction;
  return bundle;
}

eval::EvalReport evaluate_bundle(const model_io::ModelBundle& bundle, const Corpus& corpus, eval::Averaging averaging) {
  std::vector<std::string> texts;
  std::vector<Label> y;
  for (const auto& r : corpus.reviews) {
    texts.push_back(r.text);
    y.push_back(r.label);
  }
  std::vector<double> scores;
  for (const auto& p : model_io::predict_texts(bundle, texts)) scores.push_back(p.score);
  auto rep = eval::evaluate_scores(scores, y, averaging);
  rep.model_name = std::string(classifiers::model_name(bundle.model.kind));
  rep.feature_config = bundle.vectorizer_config;
  rep.split_seed = bundle.split_seed;
  rep.train_fraction = bundle.train_fraction;
  return rep;
}

std::vector<GridCell> grid_cells(const GridSpec& spec) {
  std::vector<GridCell> cells;
  for (const auto& r : spec.ngram_ranges)
    for (std::size_t mf : spec.max_features) {
      const GridCell cell{r, mf};
      if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
    }
  return cells;
}

GridResult grid_search(const ExperimentConfig& base, const GridSpec& spec, const Corpus& corpus) {
  validate(base);
  const auto cells = grid_cells(spec);
  if (cells.empty()) bad_config("grid is empty");

  GridResult result;
  for (const auto& m : base.models) result.model_names.emplace_back(classifiers::model_name(m.kind));

  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& r : corpus.reviews) texts.push_back(r.text);
  const auto prepped = kernels::parallel::preprocess_corpus(texts, base.prep);

  for (const auto& cell : cells) {
    GridRow row;
    row.cell = cell;
    try {
      ExperimentConfig config = base;
      config.vectorizer.ngram_range = cell.ngram_range;
      config.vectorizer.max_features = cell.max_features;
      validate(config);
      std::vector<report::MetricsRecord> records;
      for (std::uint64_t seed : config.seeds)
        for (const auto& rep : run_seed(config, corpus, prepped, seed)) records.push_back(report::to_record(rep));
      const auto aggregates = report::aggregate(records);
      for (const auto& name : result.model_names) {
        const auto it = std::find_if(aggregates.begin(), aggregates.end(), [&](const auto& a) { return a.model == name; });
        row.mean_accuracy.push_back(it->mean[0]);
      }
    } catch (const Error& e) {
      row.error = e.what();
      row.mean_accuracy.clear();
    }
    result.rows.push_back(std::move(row));
  }

  for (std::size_t m = 0; m < result.model_names.size(); ++m) {
    std::size_t best = result.rows.size();
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
      const auto& row = result.rows[r];
      if (row.error) continue;
      if (best == result.rows.size() || row.mean_accuracy[m] > result.rows[best].mean_accuracy[m]) best = r;
    }
    result.best_row.push_back(best);
  }
  return result;
}

std::string GridResult::table_csv() const {
  std::ostringstream out;
  out << "ngram_min,ngram_max,max_features,status";
  for (const auto& name : model_names) out << ',' << csv::escape(name);
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    out << row.cell.ngram_range.min_n << ',' << row.cell.ngram_range.max_n << ',' << row.cell.max_features << ',';
    out << (row.error ? csv::escape("failed: " + *row.error) : std::string("ok"));
    for (std::size_t m = 0; m < model_names.size(); ++m) {
      out << ',';
      if (!row.error) {
        std::snprintf(buf, sizeof buf, "%.6f", row.mean_accuracy[m]);
        out << buf;
      }
    }
    out << '\n';
  }
  return std::move(out).str();
}

std::string GridResult::best_csv() const {
  std::ostringstream out;
  out << "model,ngram_min,ngram_max,max_features,mean_accuracy\n";
  char buf[32];
  for (std::size_t m = 0; m < model_names.size(); ++m) {
    out << csv::escape(model_names[m]) << ',';
    if (best_row[m] == rows.size()) {
      out << ",,,\n";
      continue;
    }
    const auto& row = rows[best_row[m]];
    std::snprintf(buf, sizeof buf, "%.6f", row.mean_accuracy[m]);
    out << row.cell.ngram_range.min_n << ',' << row.cell.ngram_range.max_n << ',' << row.cell.max_features << ',' << buf
        << '\n';
  }
  return std::move(out).str();
}

}  // namespace dtc::experiment
