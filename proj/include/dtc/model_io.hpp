#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dtc/classifiers.hpp"
#include "dtc/textprep.hpp"
#include "dtc/vectorizer.hpp"

namespace dtc::model_io {

inline constexpr int kFormatVersion = 1;

/// Everything predict needs: preprocessing, the fitted feature space and the
/// classifier.
struct ModelBundle {
  classifiers::TrainedModel model;
  vectorizer::VectorizerConfig vectorizer_config{};
  vectorizer::Vocabulary vocab;
  vectorizer::IdfTable idf;
  textprep::PrepConfig prep{};
  // Split the model was trained on; echoed into evaluation records.
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
};

/// {"format_version", "checksum", "payload"}; the checksum is the CRC-32 of
/// the compact payload serialization.
std::string serialize(const ModelBundle& bundle);
/// Throws UnsupportedVersion or CorruptFile (bad JSON, missing fields,
/// checksum mismatch).
ModelBundle deserialize(std::string_view text);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

struct Prediction {
  double score = 0.0;
  Label label = Label::Truthful;
};

/// prep -> transform -> decision_score for each raw text.
std::vector<Prediction> predict_texts(const ModelBundle& bundle, const std::vector<std::string>& texts);

/// One raw text per input line; output lines are "<score>\t<label>".
std::string predict_file(const std::filesystem::path& model_path, const std::filesystem::path& input_path);

}  // namespace dtc::model_io
