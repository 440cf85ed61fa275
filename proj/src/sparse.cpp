#include "dtc/sparse.hpp"

#include <cmath>

namespace dtc {

bool is_canonical(const FeatureVector& v) {
  for (std::size_t k = 0; k < v.entries.size(); ++k) {
    const auto& e = v.entries[k];
    if (e.index >= v.dimension || e.value == 0.0 || !std::isfinite(e.value)) return false;
    if (k > 0 && v.entries[k - 1].index >= e.index) return false;
  }
  return true;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      sum += ia->value * ib->value;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double dot(std::span<const double> dense, const FeatureVector& v) {
  double sum = 0.0;
  for (const auto& e : v.entries) sum += dense[e.index] * e.value;
  return sum;
}

double squared_norm(const FeatureVector& v) {
  double sum = 0.0;
  for (const auto& e : v.entries) sum += e.value * e.value;
  return sum;
}

double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() || ib != b.entries.end()) {
    double d;
    if (ib == b.entries.end() || (ia != a.entries.end() && ia->index < ib->index)) {
      d = ia->value;
      ++ia;
    } else if (ia == a.entries.end() || ib->index < ia->index) {
      d = -ib->value;
      ++ib;
    } else {
      d = ia->value - ib->value;
      ++ia;
      ++ib;
    }
    sum += d * d;
  }
  return sum;
}

}  // namespace dtc
