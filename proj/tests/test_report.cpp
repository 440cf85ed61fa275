#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"

#include "dtc/csv.hpp"
#include "dtc/error.hpp"
#include "dtc/io.hpp"
#include "dtc/report.hpp"
#include "dtc/splitmix.hpp"

using namespace dtc;
using namespace dtc::report;
using nlohmann::json;

namespace {

const std::filesystem::path kData = DTC_TEST_DATA;

std::vector<MetricsRecord> table1() { return load_records(kData / "table1_records.json"); }

MetricsRecord sample_record(const std::string& model, std::uint64_t seed, double accuracy) {
  MetricsRecord r;
  r.model = model;
  r.ngram_min = 2;
  r.ngram_max = 2;
  r.max_features = 1000;
  r.idf_mode = "smoothed";
  r.l2_normalize = true;
  r.seed = seed;
  r.train_fraction = 0.8;
  r.averaging = "weighted";
  r.accuracy = accuracy;
  r.precision = accuracy;
  r.recall = accuracy;
  r.f1 = accuracy;
  r.auc = 0.5 + accuracy / 2;
  r.confusion = {10, 2, 3, 9};
  return r;
}

ErrorKind kind_of(auto fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Empty;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dtc_report_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> rows_of(const std::string& csv_text) { return csv::parse(csv_text); }

}  // namespace

TEST_CASE("records round-trip through the JSON schema") {
  const auto records = table1();
  REQUIRE(records.size() == 5);
  CHECK(records_from_json_text(to_json(records), "mem") == records);
  CHECK(record_from_json_text(to_json(records[2]), "mem") == records[2]);

  const auto j = json::parse(to_json(records[0]));
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"accuracy", "auc", "averaging", "confusion", "f1", "family", "feature_config",
                                         "model", "precision", "recall", "runtime_ms", "schema_version", "split"});
}

TEST_CASE("schema violations name the source") {
  const auto good = json::parse(to_json(sample_record("PA", 1, 0.9)));
  auto broken = [&](auto mutate) {
    json j = good;
    mutate(j);
    std::string message;
    const auto kind = kind_of([&] { record_from_json_text(j.dump(), "runs/bad.json"); }, &message);
    CHECK(message.find("runs/bad.json") != std::string::npos);
    return kind == ErrorKind::SchemaMismatch;
  };
  CHECK(broken([](json& j) { j.erase("auc"); }));
  CHECK(broken([](json& j) { j["extra"] = 1; }));
  CHECK(broken([](json& j) { j["accuracy"] = "high"; }));
  CHECK(broken([](json& j) { j["accuracy"] = 1.5; }));
  CHECK(broken([](json& j) { j["family"] = "neural"; }));
  CHECK(broken([](json& j) { j["schema_version"] = 2; }));
  CHECK(broken([](json& j) { j["confusion"]["tp"] = -1; }));
  CHECK(broken([](json& j) { j["feature_config"].erase("idf_mode"); }));
  CHECK(broken([](json& j) { j["split"]["train_fraction"] = 1.0; }));
  CHECK(broken([](json& j) { j["averaging"] = "micro"; }));
  CHECK(broken([](json& j) { j["runtime_ms"] = -3; }));
  CHECK(kind_of([] { record_from_json_text("{not json", "x.json"); }) == ErrorKind::SchemaMismatch);
}

TEST_CASE("table csv has one row per model and six columns") {
  const auto rows = rows_of(emit(table1(), Format::TableCsv));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"model", "accuracy", "f1", "recall", "precision", "auc"});
  for (const auto& row : rows) CHECK(row.size() == 6);
  CHECK(rows[3] == std::vector<std::string>{"PA", "0.905000", "0.910000", "0.905000", "0.905000", "0.975400"});
}

TEST_CASE("figure csv is long format, models times metrics") {
  const auto rows = rows_of(emit(table1(), Format::FigureCsv));
  REQUIRE(rows.size() == 1 + 5 * 5);
  CHECK(rows[0] == std::vector<std::string>{"model", "metric", "value"});
  CHECK(rows[1] == std::vector<std::string>{"LR", "accuracy", "0.878000"});
  CHECK(rows[25] == std::vector<std::string>{"SVM", "auc", "0.959800"});
}

TEST_CASE("metrics-json emission and formats") {
  const auto records = table1();
  CHECK(emit(records, Format::MetricsJson) == to_json(records));
  CHECK(format_from_string("table-csv") == Format::TableCsv);
  CHECK(kind_of([] { format_from_string("xlsx"); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { emit({}, Format::TableCsv); }) == ErrorKind::Empty);
}

TEST_CASE("aggregates are recomputable from the records") {
  SplitMix64 rng(3);
  std::vector<MetricsRecord> records;
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    for (const char* model : {"LR", "PA"}) records.push_back(sample_record(model, seed, 0.7 + 0.2 * rng.uniform()));
  const auto groups = aggregate(records);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].model == "LR");
  CHECK(groups[1].model == "PA");
  for (const auto& g : groups) {
    CHECK(g.n == 5);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      std::vector<double> values;
      for (const auto& r : records)
        if (r.model == g.model) values.push_back(metric_value(r, kMetricNames[m]));
      double mean = 0;
      for (double v : values) mean += v / 5;
      double var = 0;
      for (double v : values) var += (v - mean) * (v - mean) / 4;
      CHECK(std::abs(g.mean[m] - mean) < 1e-12);
      CHECK(std::abs(g.stddev[m] - std::sqrt(var)) < 1e-12);
    }
  }
  CHECK(aggregate({sample_record("NB", 1, 0.8)})[0].stddev[0] == 0.0);
}

TEST_CASE("compare merges both families into nine rows") {
  const auto cmp = compare({kData / "table1_records.json"}, {kData / "table2_records.json"});
  CHECK(cmp.warnings.empty());
  CHECK(cmp.rows == 9);
  const auto rows = rows_of(cmp.table_csv);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == std::vector<std::string>{"family", "model", "accuracy", "f1", "recall", "precision", "auc",
                                            "n_records"});
  CHECK(rows[3][1] == "PA");
  CHECK(rows[3][2] == "0.905000");
  CHECK(rows[9] == std::vector<std::string>{"transformer", "RoBERTa", "0.913000", "0.906000", "0.850000", "0.971000",
                                            "0.971000", "1"});
  CHECK(rows[7][1] == "XLNET");
  CHECK(rows[7][5] == "1.000000");
  const auto fig = rows_of(cmp.figure_csv);
  CHECK(fig.size() == 1 + 9 * 5);
  CHECK(fig[0] == std::vector<std::string>{"family", "model", "metric", "value"});
}

TEST_CASE("compare with no secondary reports warns and succeeds") {
  const auto cmp = compare({kData / "table1_records.json"}, {});
  CHECK(cmp.rows == 5);
  REQUIRE(cmp.warnings.size() == 1);
  CHECK(cmp.warnings[0].find("classical-only") != std::string::npos);
}

TEST_CASE("compare rejects a malformed or misplaced file by name") {
  const auto dir = temp_dir("compare");
  io::write_file_atomic(dir / "broken.json", "[{\"model\": \"BERT\"}]");
  std::string message;
  CHECK(kind_of([&] { compare({kData / "table1_records.json"}, {dir / "broken.json"}); }, &message) ==
        ErrorKind::SchemaMismatch);
  CHECK(message.find("broken.json") != std::string::npos);

  CHECK(kind_of([&] { compare({kData / "table2_records.json"}, {}); }, &message) == ErrorKind::SchemaMismatch);
  CHECK(message.find("table2_records.json") != std::string::npos);
}
