#include "dtc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "dtc/csv.hpp"
#include "dtc/error.hpp"
#include "dtc/io.hpp"
#include "dtc/splitmix.hpp"

namespace dtc {
namespace {

constexpr std::array<std::string_view, 5> kColumns = {"deceptive", "hotel", "polarity", "source", "text"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

std::optional<Label> parse_label(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "deceptive") return Label::Deceptive;
  if (v == "truthful") return Label::Truthful;
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view raw) {
  const std::string v = lower(trim(raw));
  if (v == "positive") return Polarity::Positive;
  if (v == "negative") return Polarity::Negative;
  return std::nullopt;
}

std::string_view polarity_name(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

}  // namespace

std::size_t Corpus::count(Label label) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(reviews.begin(), reviews.end(), [label](const Review& r) { return r.label == label; }));
}

Corpus parse_corpus(std::string_view csv_content, std::string name) {
  const auto rows = csv::parse(csv_content);
  if (rows.empty()) throw Error(ErrorKind::MissingColumn, "file has no header");

  std::array<std::size_t, kColumns.size()> col{};
  for (std::size_t k = 0; k < kColumns.size(); ++k) {
    const auto& header = rows.front();
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return lower(trim(h)) == kColumns[k]; });
    if (it == header.end()) throw Error(ErrorKind::MissingColumn, "header lacks column '" + std::string(kColumns[k]) + "'");
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  const std::size_t width = *std::max_element(col.begin(), col.end()) + 1;

  Corpus corpus;
  corpus.name = std::move(name);
  corpus.reviews.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r);
    if (row.size() < width) throw Error(ErrorKind::BadField, where + ": expected at least " + std::to_string(width) + " fields");

    Review review;
    review.id = r - 1;
    const auto label = parse_label(row[col[0]]);
    if (!label) throw Error(ErrorKind::BadLabel, where + ": deceptive column is '" + row[col[0]] + "'");
    review.label = *label;
    review.hotel = row[col[1]];
    const auto polarity = parse_polarity(row[col[2]]);
    if (!polarity) throw Error(ErrorKind::BadField, where + ": polarity column is '" + row[col[2]] + "'");
    review.polarity = *polarity;
    review.source = row[col[3]];
    review.text = row[col[4]];
    if (trim(review.text).empty()) throw Error(ErrorKind::EmptyText, where + ": text is empty");
    corpus.reviews.push_back(std::move(review));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  return parse_corpus(io::read_file(path), path.stem().string());
}

SplitManifest stratified_split(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorKind::InvalidConfig, "train_fraction must lie in (0,1)");

  SplitManifest manifest;
  manifest.seed = seed;
  manifest.train_fraction = train_fraction;

  SplitMix64 rng(seed);
  for (Label label : {Label::Deceptive, Label::Truthful}) {
    std::vector<std::size_t> ids;
    for (const auto& r : corpus.reviews)
      if (r.label == label) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());

    const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(ids.size())));
    if (ids.size() < 2 || n_train == 0 || n_train == ids.size())
      throw Error(ErrorKind::DegenerateClass, std::string(label_name(label)) + " class of size " +
                                                  std::to_string(ids.size()) + " cannot be split at " +
                                                  std::to_string(train_fraction));

    fisher_yates(std::span<std::size_t>(ids), rng);
    manifest.train_ids.insert(manifest.train_ids.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    manifest.test_ids.insert(manifest.test_ids.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  }
  std::sort(manifest.train_ids.begin(), manifest.train_ids.end());
  std::sort(manifest.test_ids.begin(), manifest.test_ids.end());
  return manifest;
}

std::string corpus_to_csv(const Corpus& corpus) {
  std::ostringstream out;
  csv::write_row(out, {kColumns.begin(), kColumns.end()});
  for (const auto& r : corpus.reviews) {
    csv::write_row(out, {std::string(label_name(r.label)), r.hotel, std::string(polarity_name(r.polarity)), r.source,
                         r.text});
  }
  return std::move(out).str();
}

Corpus subset(const Corpus& corpus, const std::vector<std::size_t>& ids, std::string name) {
  std::vector<const Review*> by_id(corpus.size() == 0 ? 0 : corpus.reviews.back().id + 1, nullptr);
  for (const auto& r : corpus.reviews) {
    if (r.id >= by_id.size()) by_id.resize(r.id + 1, nullptr);
    by_id[r.id] = &r;
  }
  Corpus out;
  out.name = std::move(name);
  out.reviews.reserve(ids.size());
  for (std::size_t id : ids) {
    if (id >= by_id.size() || by_id[id] == nullptr)
      throw Error(ErrorKind::InvalidConfig, "id " + std::to_string(id) + " is not in corpus '" + corpus.name + "'");
    Review r = *by_id[id];
    r.id = out.reviews.size();
    out.reviews.push_back(std::move(r));
  }
  return out;
}

std::string manifest_to_json(const SplitManifest& manifest) {
  nlohmann::ordered_json j;
  j["format_version"] = SplitManifest::kFormatVersion;
  j["seed"] = manifest.seed;
  j["train_fraction"] = manifest.train_fraction;
  j["train_ids"] = manifest.train_ids;
  j["test_ids"] = manifest.test_ids;
  return j.dump(2) + "\n";
}

SplitManifest manifest_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != SplitManifest::kFormatVersion)
      throw Error(ErrorKind::UnsupportedVersion, "manifest format_version " + j.at("format_version").dump());
    SplitManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.train_fraction = j.at("train_fraction").get<double>();
    m.train_ids = j.at("train_ids").get<std::vector<std::size_t>>();
    m.test_ids = j.at("test_ids").get<std::vector<std::size_t>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptFile, std::string("manifest field error: ") + e.what());
  }
}

ExportedSplit export_split(const Corpus& corpus, const SplitManifest& manifest, const std::filesystem::path& out_dir) {
  // subset() validates ids, so nothing is written for a bad manifest.
  const Corpus train = subset(corpus, manifest.train_ids, corpus.name + "-train");
  const Corpus test = subset(corpus, manifest.test_ids, corpus.name + "-test");

  ExportedSplit out{out_dir / "train.csv", out_dir / "test.csv", out_dir / "split_manifest.json"};
  io::write_file_atomic(out.train_file, corpus_to_csv(train));
  io::write_file_atomic(out.test_file, corpus_to_csv(test));
  io::write_file_atomic(out.manifest_file, manifest_to_json(manifest));
  return out;
}

}  // namespace dtc
