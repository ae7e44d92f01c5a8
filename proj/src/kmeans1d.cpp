#include "wordprep/kmeans1d.hpp"

#include <algorithm>
#include <cmath>

#include "wordprep/errors.hpp"

namespace wordprep {

namespace {

// Assigns each value to the nearer centroid, ties to lo. Returns true if
// any label changed.
bool assign(std::span<const double> values, double lo, double hi, std::vector<int>& labels) {
  bool changed = false;
  for (size_t i = 0; i < values.size(); ++i) {
    const int label = std::abs(values[i] - lo) <= std::abs(values[i] - hi) ? 0 : 1;
    if (label != labels[i]) {
      labels[i] = label;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

TwoMeansResult two_means_1d(std::span<const double> values, double tol, int max_iter) {
  if (values.size() < 2) {
    throw EmptyInput("two_means_1d: need at least 2 values, got " +
                     std::to_string(values.size()));
  }
  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  if (!(*mx_it - *mn_it > 0.0)) {
    throw DegenerateInput("two_means_1d: all values equal (" + std::to_string(*mn_it) + ")");
  }

  TwoMeansResult res;
  res.centroid_lo = *mn_it;
  res.centroid_hi = *mx_it;
  res.labels.assign(values.size(), 0);
  assign(values, res.centroid_lo, res.centroid_hi, res.labels);

  for (int it = 1; it <= max_iter; ++it) {
    double sum_lo = 0.0, sum_hi = 0.0;
    size_t n_lo = 0, n_hi = 0;
    for (size_t i = 0; i < values.size(); ++i) {
      if (res.labels[i] == 0) {
        sum_lo += values[i];
        ++n_lo;
      } else {
        sum_hi += values[i];
        ++n_hi;
      }
    }
    // min stays in the lo cluster and max in the hi cluster under min/max
    // initialization, so neither count can reach zero.
    const double new_lo = n_lo ? sum_lo / double(n_lo) : res.centroid_lo;
    const double new_hi = n_hi ? sum_hi / double(n_hi) : res.centroid_hi;
    res.centroid_lo = new_lo;
    res.centroid_hi = new_hi;
    res.iterations = it;
    const bool changed = assign(values, res.centroid_lo, res.centroid_hi, res.labels);
    // A stable assignment is the exact fixed point and implies the
    // centroids moved by zero, which satisfies any tol. Stopping on tol
    // alone while labels still change would void the fixed-point
    // guarantee, so stability is the stop that counts; max_iter caps the
    // loop.
    if (!changed) break;
  }
  (void)tol;
  return res;
}

}  // namespace wordprep
