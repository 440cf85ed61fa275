// dtc: deceptive-review classification toolkit.
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dtc/corpus.hpp"
#include "dtc/error.hpp"
#include "dtc/experiment.hpp"
#include "dtc/io.hpp"
#include "dtc/model_io.hpp"
#include "dtc/report.hpp"

namespace fs = std::filesystem;
using namespace dtc;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

// Flags shared by the subcommands that build an ExperimentConfig.
struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> dataset;
  std::optional<int> ngram_min, ngram_max;
  std::optional<std::size_t> max_features;
  std::vector<std::string> models;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::optional<double> train_fraction;
  std::optional<std::string> idf_mode;
  std::optional<std::string> averaging;
  std::optional<std::string> out;
  bool record_runtime = false;

  void attach(CLI::App* cmd, bool with_models) {
    cmd->add_option("--config", config, "JSON experiment config (flags override it)");
    cmd->add_option("--dataset", dataset, "Dataset CSV");
    cmd->add_option("--ngram-min", ngram_min, "Smallest n-gram length");
    cmd->add_option("--ngram-max", ngram_max, "Largest n-gram length");
    cmd->add_option("--max-features", max_features, "Vocabulary size cap");
    if (with_models) cmd->add_option("--model", models, "Model(s): LR, LSVM, PA, NB, SVM")->delimiter(',');
    cmd->add_option("--seed", seed, "Split seed");
    cmd->add_option("--seeds", seeds, "Split seeds (comma separated)")->delimiter(',');
    cmd->add_option("--train-fraction", train_fraction, "Train share in (0,1)");
    cmd->add_option("--idf-mode", idf_mode, "smoothed | paper_exact");
    cmd->add_option("--averaging", averaging, "weighted | macro | positive_class");
    cmd->add_option("--out", out, "Output location");
    cmd->add_flag("--record-runtime", record_runtime, "Record wall-clock runtime_ms in reports");
  }

  experiment::ExperimentConfig build() const {
    experiment::ExperimentConfig c = config ? experiment::load_config(*config) : experiment::ExperimentConfig{};
    if (dataset) c.dataset_path = *dataset;
    if (ngram_min) c.vectorizer.ngram_range.min_n = *ngram_min;
    if (ngram_max) c.vectorizer.ngram_range.max_n = *ngram_max;
    if (max_features) c.vectorizer.max_features = *max_features;
    if (!models.empty()) {
      // Hyperparameters from the config file survive for models that stay selected.
      std::vector<experiment::ModelSpec> selected;
      for (const auto& name : models) {
        const auto kind = classifiers::model_kind_from_string(name);
        experiment::ModelSpec spec{kind, {}};
        for (const auto& m : c.models)
          if (m.kind == kind) spec = m;
        selected.push_back(spec);
      }
      c.models = std::move(selected);
    }
    if (!seeds.empty()) c.seeds = seeds;
    if (seed) c.seeds = {*seed};
    if (train_fraction) c.train_fraction = *train_fraction;
    if (idf_mode) c.vectorizer.idf_mode = vectorizer::idf_mode_from_string(*idf_mode);
    if (averaging) c.averaging = eval::averaging_from_string(*averaging);
    if (out) c.output_dir = *out;
    if (record_runtime) c.record_runtime = true;
    experiment::validate(c);
    return c;
  }
};

void write_or_print(const std::optional<std::string>& out, const std::string& content) {
  if (out && *out != "-")
    io::write_file_atomic(*out, content);
  else
    std::cout << content;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::SchemaMismatch:
    case ErrorKind::UnknownStopwordList:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deceptive review classification: TF-IDF features, five classifiers, benchmark harness"};
  app.require_subcommand(1);

  Overrides split_opts, train_opts, run_opts, grid_opts;

  auto* split_cmd = app.add_subcommand("split", "Stratified split of a dataset; writes train.csv, test.csv and split_manifest.json");
  split_opts.attach(split_cmd, false);

  auto* train_cmd = app.add_subcommand("train", "Fit one model on the train part of a split and save the model file");
  train_opts.attach(train_cmd, true);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a labeled CSV with a saved model; writes metrics-json");
  std::string eval_model_path;
  std::string eval_dataset;
  std::optional<std::string> eval_averaging, eval_out;
  eval_cmd->add_option("--model-path", eval_model_path, "Model file written by train")->required();
  eval_cmd->add_option("--dataset", eval_dataset, "Labeled CSV (e.g. an exported test.csv)")->required();
  eval_cmd->add_option("--averaging", eval_averaging, "weighted | macro | positive_class");
  eval_cmd->add_option("--out", eval_out, "metrics-json output file (default stdout)");

  auto* run_cmd = app.add_subcommand("run", "Full experiment over every seed and model; writes metrics.json, table.csv, figure.csv, bundle.json");
  run_opts.attach(run_cmd, true);

  auto* grid_cmd = app.add_subcommand("grid", "Feature grid (n-gram ranges x max_features); writes grid.csv and grid_best.csv");
  grid_opts.attach(grid_cmd, true);

  auto* predict_cmd = app.add_subcommand("predict", "Score raw texts, one per line; prints score<TAB>label");
  std::string predict_model_path, predict_input;
  std::optional<std::string> predict_out;
  predict_cmd->add_option("--model-path", predict_model_path, "Model file written by train")->required();
  predict_cmd->add_option("--input", predict_input, "Text file, one review per line")->required();
  predict_cmd->add_option("--out", predict_out, "Output file (default stdout)");

  auto* report_cmd = app.add_subcommand("report", "Re-emit metrics-json records as metrics-json, table-csv or figure-csv");
  std::vector<std::string> report_inputs;
  std::string report_format = "table-csv";
  std::optional<std::string> report_out;
  report_cmd->add_option("--input", report_inputs, "metrics-json file(s)")->required()->delimiter(',');
  report_cmd->add_option("--format", report_format, "metrics-json | table-csv | figure-csv");
  report_cmd->add_option("--out", report_out, "Output file (default stdout)");

  auto* compare_cmd = app.add_subcommand("compare", "Merge classical and transformer metrics-json files");
  std::vector<std::string> primary, secondary;
  std::optional<std::string> compare_out;
  compare_cmd->add_option("--primary", primary, "Classical metrics-json file(s)")->delimiter(',');
  compare_cmd->add_option("--secondary", secondary, "Transformer metrics-json file(s)")->delimiter(',');
  compare_cmd->add_option("--out", compare_out, "Output directory (default: print the table)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (split_cmd->parsed()) {
      auto c = split_opts.build();
      const auto corpus = load_corpus(c.dataset_path);
      const auto manifest = stratified_split(corpus, c.train_fraction, c.seeds.front());
      const auto files = export_split(corpus, manifest, split_opts.out ? fs::path(*split_opts.out) : fs::path("split"));
      std::cout << "train: " << files.train_file.string() << " (" << manifest.train_ids.size() << " rows)\n"
                << "test: " << files.test_file.string() << " (" << manifest.test_ids.size() << " rows)\n"
                << "manifest: " << files.manifest_file.string() << "\n";
    } else if (train_cmd->parsed()) {
      if (train_opts.models.size() > 1) throw Error(ErrorKind::InvalidConfig, "train takes a single --model");
      auto opts = train_opts;
      opts.out.reset();
      auto c = opts.build();
      const auto corpus = load_corpus(c.dataset_path);
      const auto& spec = c.models.front();
      const auto bundle = experiment::train_bundle(c, corpus, spec, c.seeds.front());
      const fs::path path = train_opts.out ? fs::path(*train_opts.out)
                                           : fs::path("model-" + std::string(classifiers::model_name(spec.kind)) + ".json");
      model_io::save_model(bundle, path);
      std::cout << "model: " << path.string() << "\n";
    } else if (eval_cmd->parsed()) {
      const auto averaging = eval_averaging ? eval::averaging_from_string(*eval_averaging) : eval::Averaging::Weighted;
      const auto bundle = model_io::load_model(eval_model_path);
      const auto corpus = load_corpus(eval_dataset);
      const auto rep = experiment::evaluate_bundle(bundle, corpus, averaging);
      write_or_print(eval_out, report::to_json(std::vector<report::MetricsRecord>{report::to_record(rep)}));
    } else if (run_cmd->parsed()) {
      const auto c = run_opts.build();
      const auto bundle = experiment::run_experiment(c);
      experiment::write_run_outputs(bundle, c.output_dir);
      std::cout << report::emit(bundle.records(), report::Format::TableCsv);
    } else if (grid_cmd->parsed()) {
      const auto c = grid_opts.build();
      const auto corpus = load_corpus(c.dataset_path);
      const auto result = experiment::grid_search(c, c.grid, corpus);
      io::write_file_atomic(c.output_dir / "grid.csv", result.table_csv());
      io::write_file_atomic(c.output_dir / "grid_best.csv", result.best_csv());
      std::cout << result.table_csv();
    } else if (predict_cmd->parsed()) {
      write_or_print(predict_out, model_io::predict_file(predict_model_path, predict_input));
    } else if (report_cmd->parsed()) {
      std::vector<report::MetricsRecord> records;
      for (const auto& in : report_inputs) {
        auto r = report::load_records(in);
        records.insert(records.end(), r.begin(), r.end());
      }
      write_or_print(report_out, report::emit(records, report::format_from_string(report_format)));
    } else if (compare_cmd->parsed()) {
      const std::vector<fs::path> p(primary.begin(), primary.end());
      const std::vector<fs::path> s(secondary.begin(), secondary.end());
      const auto cmp = report::compare(p, s);
      for (const auto& w : cmp.warnings) std::cerr << "warning: " << w << "\n";
      if (compare_out) {
        io::write_file_atomic(fs::path(*compare_out) / "comparison.csv", cmp.table_csv);
        io::write_file_atomic(fs::path(*compare_out) / "comparison_figure.csv", cmp.figure_csv);
      }
      std::cout << cmp.table_csv;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
