#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtc/classifiers.hpp"
#include "dtc/corpus.hpp"
#include "dtc/eval.hpp"
#include "dtc/model_io.hpp"
#include "dtc/report.hpp"
#include "dtc/textprep.hpp"
#include "dtc/vectorizer.hpp"

namespace dtc::experiment {

struct ModelSpec {
  classifiers::ModelKind kind = classifiers::ModelKind::PassiveAggressive;
  classifiers::Hyperparams hyperparams{};

  bool operator==(const ModelSpec&) const = default;
};

std::vector<ModelSpec> all_models();

struct GridSpec {
  std::vector<vectorizer::NgramRange> ngram_ranges = {{1, 1}, {1, 2}, {2, 2}};
  std::vector<std::size_t> max_features = {1000, 5000, 10000, 25000};

  bool operator==(const GridSpec&) const = default;
};

struct ExperimentConfig {
  std::filesystem::path dataset_path = "data/deceptive-opinion.csv";
  textprep::PrepConfig prep{};
  vectorizer::VectorizerConfig vectorizer{};
  std::vector<ModelSpec> models = all_models();
  double train_fraction = 0.8;
  std::vector<std::uint64_t> seeds = {42, 43, 44, 45, 46};
  eval::Averaging averaging = eval::Averaging::Weighted;
  std::filesystem::path output_dir = "out";
  /// Wall-clock runtime_ms breaks byte-identical reports, so it is opt-in.
  bool record_runtime = false;
  GridSpec grid{};

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws InvalidConfig: no models, no seeds, duplicate models, bad ranges.
void validate(const ExperimentConfig& config);

/// Config file: JSON object with optional keys dataset, prep, vectorizer,
/// models, split, averaging, output_dir, record_runtime, grid. Unknown keys
/// are rejected. Missing keys keep the defaults above.
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

struct RunBundle {
  ExperimentConfig config;
  std::vector<eval::EvalReport> reports;  // seed-major, then config.models order
  std::vector<report::Aggregate> aggregates;

  std::vector<report::MetricsRecord> records() const;
};

/// One seed: split, fit the vocabulary on the train part only, transform
/// both parts, fit and evaluate every model.
std::vector<eval::EvalReport> run_seed(const ExperimentConfig& config, const Corpus& corpus,
                                       const std::vector<textprep::TokenSequence>& prepped, std::uint64_t seed);

RunBundle run_experiment(const ExperimentConfig& config, const Corpus& corpus);
RunBundle run_experiment(const ExperimentConfig& config);

/// config echo, per-(model, seed) records with P/R/F1 under every averaging
/// mode, and per-model mean/stddev.
std::string bundle_to_json(const RunBundle& bundle);

/// Writes metrics.json, table.csv, figure.csv and bundle.json into dir.
void write_run_outputs(const RunBundle& bundle, const std::filesystem::path& dir);

/// Fits prep + vocabulary + one model on the train part of the seeded split.
model_io::ModelBundle train_bundle(const ExperimentConfig& config, const Corpus& corpus, const ModelSpec& spec,
                                   std::uint64_t seed);

/// Scores every review of `corpus` with a persisted pipeline.
eval::EvalReport evaluate_bundle(const model_io::ModelBundle& bundle, const Corpus& corpus, eval::Averaging averaging);

struct GridCell {
  vectorizer::NgramRange ngram_range{};
  std::size_t max_features = 0;

  bool operator==(const GridCell&) const = default;
};

struct GridRow {
  GridCell cell;
  std::optional<std::string> error;     // set when the cell failed
  std::vector<double> mean_accuracy;    // aligned with model_names
};

struct GridResult {
  std::vector<std::string> model_names;
  std::vector<GridRow> rows;
  std::vector<std::size_t> best_row;  // per model, index into rows (rows.size() if none succeeded)

  std::string table_csv() const;
  std::string best_csv() const;
};

/// Cartesian product in the given order, duplicates dropped.
std::vector<GridCell> grid_cells(const GridSpec& spec);

/// Runs every cell; a failing cell is recorded and the sweep continues.
GridResult grid_search(const ExperimentConfig& base, const GridSpec& spec, const Corpus& corpus);

}  // namespace dtc::experiment
