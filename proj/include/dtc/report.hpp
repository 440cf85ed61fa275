#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dtc/eval.hpp"

namespace dtc::report {

inline constexpr int kSchemaVersion = 1;

/// One (model, seed) result in the metrics JSON schema shared with the
/// transformer baselines:
///   {schema_version, family, model,
///    feature_config: {ngram_min, ngram_max, max_features, idf_mode, l2_normalize},
///    split: {seed, train_fraction}, averaging,
///    accuracy, precision, recall, f1, auc,
///    confusion: {tp, fp, fn, tn}, runtime_ms}
struct MetricsRecord {
  int schema_version = kSchemaVersion;
  std::string family = "classical";  // classical | transformer
  std::string model;
  int ngram_min = 0;
  int ngram_max = 0;
  std::uint64_t max_features = 0;
  std::string idf_mode;
  bool l2_normalize = false;
  std::uint64_t seed = 0;
  double train_fraction = 0.0;
  std::string averaging;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  eval::ConfusionMatrix confusion{};
  std::int64_t runtime_ms = 0;

  bool operator==(const MetricsRecord&) const = default;
};

MetricsRecord to_record(const eval::EvalReport& report, std::string family = "classical");

/// Columns in Table-1 order.
inline constexpr std::array<std::string_view, 5> kMetricNames = {"accuracy", "f1", "recall", "precision", "auc"};
double metric_value(const MetricsRecord& r, std::string_view metric);

std::string to_json(const std::vector<MetricsRecord>& records);
std::string to_json(const MetricsRecord& record);

/// Throws SchemaMismatch (message prefixed with `source`) when a record is
/// missing a key, has an extra key, a wrong type or an out-of-range metric.
MetricsRecord record_from_json_text(std::string_view text, std::string_view source);
/// A metrics-json file holds a single record object or an array of them.
std::vector<MetricsRecord> records_from_json_text(std::string_view text, std::string_view source);
std::vector<MetricsRecord> load_records(const std::filesystem::path& path);

struct Aggregate {
  std::string family;
  std::string model;
  std::size_t n = 0;
  std::array<double, 5> mean{};    // indexed like kMetricNames
  std::array<double, 5> stddev{};  // sample standard deviation; 0 when n == 1
};

/// Groups by (family, model) in first-appearance order; sums run in record order.
std::vector<Aggregate> aggregate(const std::vector<MetricsRecord>& records);

enum class Format { MetricsJson, TableCsv, FigureCsv };
Format format_from_string(std::string_view name);

/// metrics-json: every record. table-csv: model,accuracy,f1,recall,precision,auc
/// (means). figure-csv: model,metric,value (means, long format).
std::string emit(const std::vector<MetricsRecord>& records, Format format);

struct Comparison {
  std::string table_csv;   // family,model,accuracy,f1,recall,precision,auc,n_records
  std::string figure_csv;  // family,model,metric,value
  std::vector<std::string> warnings;
  std::size_t rows = 0;
};

/// Merges classical and transformer record files without recomputing any
/// metric. Files are validated first; the first bad one raises SchemaMismatch.
Comparison compare(const std::vector<std::filesystem::path>& primary, const std::vector<std::filesystem::path>& secondary);

}  // namespace dtc::report
