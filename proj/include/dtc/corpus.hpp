#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dtc/label.hpp"

namespace dtc {

enum class Polarity { Positive, Negative };

struct Review {
  std::size_t id = 0;  // 0-based row order in the source file
  Label label = Label::Truthful;
  std::string hotel;
  Polarity polarity = Polarity::Positive;
  std::string source;
  std::string text;
};

struct Corpus {
  std::string name;
  std::vector<Review> reviews;

  std::size_t size() const noexcept { return reviews.size(); }
  std::size_t count(Label label) const noexcept;
};

struct SplitManifest {
  static constexpr int kFormatVersion = 1;

  std::uint64_t seed = 42;
  double train_fraction = 0.8;
  std::vector<std::size_t> train_ids;  // sorted
  std::vector<std::size_t> test_ids;   // sorted

  bool operator==(const SplitManifest&) const = default;
};

/// Parses the deceptive-opinion CSV. The header must name the columns
/// deceptive, hotel, polarity, source and text (any order, extra columns are
/// ignored). Errors carry the 1-based data row number.
Corpus parse_corpus(std::string_view csv_content, std::string name = "corpus");
Corpus load_corpus(const std::filesystem::path& path);

/// Per-class Fisher-Yates over the sorted class ids (Deceptive first, then
/// Truthful, one SplitMix64 stream seeded with `seed`); the first
/// floor(train_fraction * class_size) ids of each class go to train.
SplitManifest stratified_split(const Corpus& corpus, double train_fraction, std::uint64_t seed);

/// Same CSV schema as the input, rows in ascending id order.
std::string corpus_to_csv(const Corpus& corpus);

/// Reviews of `corpus` selected by `ids`, renumbered 0..n-1 in the given order.
Corpus subset(const Corpus& corpus, const std::vector<std::size_t>& ids, std::string name);

std::string manifest_to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(std::string_view text);

struct ExportedSplit {
  std::filesystem::path train_file;
  std::filesystem::path test_file;
  std::filesystem::path manifest_file;
};

/// Writes train.csv, test.csv and split_manifest.json into out_dir. Every
/// manifest id is validated before anything is written.
ExportedSplit export_split(const Corpus& corpus, const SplitManifest& manifest,
                           const std::filesystem::path& out_dir);

}  // namespace dtc
