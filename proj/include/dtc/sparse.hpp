#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace dtc {

struct SparseEntry {
  std::size_t index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

/// Sorted sparse vector: indices strictly increasing and < dimension, values
/// finite and nonzero.
struct FeatureVector {
  std::vector<SparseEntry> entries;
  std::size_t dimension = 0;

  bool operator==(const FeatureVector&) const = default;
};

/// Checks the sorted/deduplicated/no-zero/finite invariants.
bool is_canonical(const FeatureVector& v);

double dot(const FeatureVector& a, const FeatureVector& b);
double dot(std::span<const double> dense, const FeatureVector& v);
double squared_norm(const FeatureVector& v);
double squared_distance(const FeatureVector& a, const FeatureVector& b);

}  // namespace dtc
