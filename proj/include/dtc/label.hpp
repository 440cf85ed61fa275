#pragma once

#include <string_view>

namespace dtc {

/// Deceptive is the positive class everywhere: metrics, classifier signs (+1),
/// and the sign rule in predict().
enum class Label { Deceptive, Truthful };

constexpr double sign_of(Label label) noexcept { return label == Label::Deceptive ? 1.0 : -1.0; }

constexpr std::string_view label_name(Label label) noexcept {
  return label == Label::Deceptive ? "deceptive" : "truthful";
}

}  // namespace dtc
