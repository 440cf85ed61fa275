#include "dtc/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

#include "dtc/error.hpp"
#include "dtc/csv.hpp"
#include "dtc/io.hpp"

namespace dtc::report {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json record_json(const MetricsRecord& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["family"] = r.family;
  j["model"] = r.model;
  j["feature_config"] = {{"ngram_min", r.ngram_min},
                         {"ngram_max", r.ngram_max},
                         {"max_features", r.max_features},
                         {"idf_mode", r.idf_mode},
                         {"l2_normalize", r.l2_normalize}};
  j["split"] = {{"seed", r.seed}, {"train_fraction", r.train_fraction}};
  j["averaging"] = r.averaging;
  j["accuracy"] = r.accuracy;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["auc"] = r.auc;
  j["confusion"] = {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}};
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

[[noreturn]] void mismatch(std::string_view source, const std::string& what) {
  throw Error(ErrorKind::SchemaMismatch, std::string(source) + ": " + what);
}

void expect_keys(const json& j, std::initializer_list<std::string_view> keys, std::string_view where,
                 std::string_view source) {
  if (!j.is_object()) mismatch(source, std::string(where) + " is not an object");
  for (auto key : keys)
    if (!j.contains(key)) mismatch(source, std::string(where) + " lacks key '" + std::string(key) + "'");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    if (!known) mismatch(source, std::string(where) + " has unexpected key '" + key + "'");
  }
}

const json& typed(const json& j, std::string_view key, json::value_t type, std::string_view source) {
  const json& v = j.at(key);
  const bool ok = type == json::value_t::number_float          ? v.is_number()
                  : type == json::value_t::number_unsigned     ? v.is_number_unsigned()
                  : type == json::value_t::number_integer      ? v.is_number_integer()
                                                               : v.type() == type;
  if (!ok) mismatch(source, "key '" + std::string(key) + "' has the wrong type");
  return v;
}

double unit_metric(const json& j, std::string_view key, std::string_view source) {
  const double v = typed(j, key, json::value_t::number_float, source).get<double>();
  if (!(v >= 0.0 && v <= 1.0)) mismatch(source, "metric '" + std::string(key) + "' is outside [0,1]");
  return v;
}

MetricsRecord record_from_json(const json& j, std::string_view source) {
  using vt = json::value_t;
  expect_keys(j,
              {"schema_version", "family", "model", "feature_config", "split", "averaging", "accuracy", "precision",
               "recall", "f1", "auc", "confusion", "runtime_ms"},
              "record", source);
  MetricsRecord r;
  r.schema_version = typed(j, "schema_version", vt::number_integer, source).get<int>();
  if (r.schema_version != kSchemaVersion) mismatch(source, "schema_version " + std::to_string(r.schema_version));
  r.family = typed(j, "family", vt::string, source).get<std::string>();
  if (r.family != "classical" && r.family != "transformer") mismatch(source, "family '" + r.family + "'");
  r.model = typed(j, "model", vt::string, source).get<std::string>();
  if (r.model.empty()) mismatch(source, "model name is empty");

  const json& fc = j.at("feature_config");
  expect_keys(fc, {"ngram_min", "ngram_max", "max_features", "idf_mode", "l2_normalize"}, "feature_config", source);
  r.ngram_min = typed(fc, "ngram_min", vt::number_unsigned, source).get<int>();
  r.ngram_max = typed(fc, "ngram_max", vt::number_unsigned, source).get<int>();
  r.max_features = typed(fc, "max_features", vt::number_unsigned, source).get<std::uint64_t>();
  r.idf_mode = typed(fc, "idf_mode", vt::string, source).get<std::string>();
  r.l2_normalize = typed(fc, "l2_normalize", vt::boolean, source).get<bool>();

  const json& split = j.at("split");
  expect_keys(split, {"seed", "train_fraction"}, "split", source);
  r.seed = typed(split, "seed", vt::number_unsigned, source).get<std::uint64_t>();
  r.train_fraction = typed(split, "train_fraction", vt::number_float, source).get<double>();
  if (!(r.train_fraction > 0.0 && r.train_fraction < 1.0)) mismatch(source, "train_fraction outside (0,1)");

  r.averaging = typed(j, "averaging", vt::string, source).get<std::string>();
  try {
    eval::averaging_from_string(r.averaging);
  } catch (const Error&) {
    mismatch(source, "averaging '" + r.averaging + "'");
  }
  r.accuracy = unit_metric(j, "accuracy", source);
  r.precision = unit_metric(j, "precision", source);
  r.recall = unit_metric(j, "recall", source);
  r.f1 = unit_metric(j, "f1", source);
  r.auc = unit_metric(j, "auc", source);

  const json& cm = j.at("confusion");
  expect_keys(cm, {"tp", "fp", "fn", "tn"}, "confusion", source);
  r.confusion.tp = typed(cm, "tp", vt::number_unsigned, source).get<std::uint64_t>();
  r.confusion.fp = typed(cm, "fp", vt::number_unsigned, source).get<std::uint64_t>();
  r.confusion.fn = typed(cm, "fn", vt::number_unsigned, source).get<std::uint64_t>();
  r.confusion.tn = typed(cm, "tn", vt::number_unsigned, source).get<std::uint64_t>();
  r.runtime_ms = typed(j, "runtime_ms", vt::number_integer, source).get<std::int64_t>();
  if (r.runtime_ms < 0) mismatch(source, "runtime_ms is negative");
  return r;
}

json parse_or_mismatch(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    mismatch(source, std::string("not valid JSON: ") + e.what());
  }
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

MetricsRecord to_record(const eval::EvalReport& report, std::string family) {
  MetricsRecord r;
  r.family = std::move(family);
  r.model = report.model_name;
  r.ngram_min = report.feature_config.ngram_range.min_n;
  r.ngram_max = report.feature_config.ngram_range.max_n;
  r.max_features = report.feature_config.max_features;
  r.idf_mode = std::string(vectorizer::to_string(report.feature_config.idf_mode));
  r.l2_normalize = report.feature_config.l2_normalize;
  r.seed = report.split_seed;
  r.train_fraction = report.train_fraction;
  r.averaging = std::string(eval::to_string(report.averaging));
  r.accuracy = report.accuracy;
  r.precision = report.precision;
  r.recall = report.recall;
  r.f1 = report.f1;
  r.auc = report.auc;
  r.confusion = report.confusion;
  r.runtime_ms = report.runtime_ms;
  return r;
}

double metric_value(const MetricsRecord& r, std::string_view metric) {
  if (metric == "accuracy") return r.accuracy;
  if (metric == "f1") return r.f1;
  if (metric == "recall") return r.recall;
  if (metric == "precision") return r.precision;
  if (metric == "auc") return r.auc;
  throw Error(ErrorKind::InvalidConfig, "unknown metric '" + std::string(metric) + "'");
}

std::string to_json(const std::vector<MetricsRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) arr.push_back(record_json(r));
  return arr.dump(2) + "\n";
}

std::string to_json(const MetricsRecord& record) { return record_json(record).dump(2) + "\n"; }

MetricsRecord record_from_json_text(std::string_view text, std::string_view source) {
  return record_from_json(parse_or_mismatch(text, source), source);
}

std::vector<MetricsRecord> records_from_json_text(std::string_view text, std::string_view source) {
  const json j = parse_or_mismatch(text, source);
  std::vector<MetricsRecord> out;
  if (j.is_array()) {
    for (const auto& item : j) out.push_back(record_from_json(item, source));
  } else {
    out.push_back(record_from_json(j, source));
  }
  return out;
}

std::vector<MetricsRecord> load_records(const std::filesystem::path& path) {
  return records_from_json_text(io::read_file(path), path.string());
}

std::vector<Aggregate> aggregate(const std::vector<MetricsRecord>& records) {
  std::vector<Aggregate> groups;
  std::vector<std::vector<const MetricsRecord*>> members;
  for (const auto& r : records) {
    std::size_t g = 0;
    while (g < groups.size() && !(groups[g].family == r.family && groups[g].model == r.model)) ++g;
    if (g == groups.size()) {
      groups.push_back({r.family, r.model, 0, {}, {}});
      members.emplace_back();
    }
    members[g].push_back(&r);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& agg = groups[g];
    agg.n = members[g].size();
    const auto n = static_cast<double>(agg.n);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      double sum = 0.0;
      for (const auto* r : members[g]) sum += metric_value(*r, kMetricNames[m]);
      agg.mean[m] = sum / n;
      double sq = 0.0;
      for (const auto* r : members[g]) {
        const double d = metric_value(*r, kMetricNames[m]) - agg.mean[m];
        sq += d * d;
      }
      agg.stddev[m] = agg.n > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
    }
  }
  return groups;
}

Format format_from_string(std::string_view name) {
  if (name == "metrics-json") return Format::MetricsJson;
  if (name == "table-csv") return Format::TableCsv;
  if (name == "figure-csv") return Format::FigureCsv;
  throw Error(ErrorKind::InvalidConfig, "unknown report format '" + std::string(name) + "' (metrics-json|table-csv|figure-csv)");
}

std::string emit(const std::vector<MetricsRecord>& records, Format format) {
  if (records.empty()) throw Error(ErrorKind::Empty, "no records to report");
  if (format == Format::MetricsJson) return to_json(records);

  std::ostringstream out;
  const auto groups = aggregate(records);
  if (format == Format::TableCsv) {
    out << "model";
    for (auto m : kMetricNames) out << ',' << m;
    out << '\n';
    for (const auto& g : groups) {
      out << csv::escape(g.model);
      for (double v : g.mean) out << ',' << fixed(v);
      out << '\n';
    }
  } else {
    out << "model,metric,value\n";
    for (const auto& g : groups)
      for (std::size_t m = 0; m < kMetricNames.size(); ++m) out << csv::escape(g.model) << ',' << kMetricNames[m] << ',' << fixed(g.mean[m]) << '\n';
  }
  return std::move(out).str();
}

Comparison compare(const std::vector<std::filesystem::path>& primary, const std::vector<std::filesystem::path>& secondary) {
  std::vector<MetricsRecord> all;
  auto ingest = [&](const std::filesystem::path& path, std::string_view family) {
    for (auto& r : load_records(path)) {
      if (r.family != family)
        mismatch(path.string(), "record family '" + r.family + "' where '" + std::string(family) + "' was expected");
      all.push_back(std::move(r));
    }
  };
  for (const auto& p : primary) ingest(p, "classical");
  for (const auto& p : secondary) ingest(p, "transformer");

  Comparison cmp;
  if (primary.empty()) cmp.warnings.push_back("no classical (primary) reports given");
  if (secondary.empty()) cmp.warnings.push_back("no transformer (secondary) reports given; table is classical-only");
  if (all.empty()) throw Error(ErrorKind::Empty, "no records to compare");

  const auto groups = aggregate(all);
  std::ostringstream table, figure;
  table << "family,model";
  for (auto m : kMetricNames) table << ',' << m;
  table << ",n_records\n";
  figure << "family,model,metric,value\n";
  for (const auto& g : groups) {
    table << g.family << ',' << csv::escape(g.model);
    for (double v : g.mean) table << ',' << fixed(v);
    table << ',' << g.n << '\n';
    for (std::size_t m = 0; m < kMetricNames.size(); ++m)
      figure << g.family << ',' << csv::escape(g.model) << ',' << kMetricNames[m] << ',' << fixed(g.mean[m]) << '\n';
  }
  cmp.table_csv = std::move(table).str();
  cmp.figure_csv = std::move(figure).str();
  cmp.rows = groups.size();
  return cmp;
}

}  // namespace dtc::report
