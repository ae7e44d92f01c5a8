#pragma once

#include <span>
#include <vector>

namespace wordprep {

struct TwoMeansResult {
  double centroid_lo = 0.0;
  double centroid_hi = 0.0;
  std::vector<int> labels;  // 0 = lo cluster, 1 = hi cluster
  int iterations = 0;
};

/// One-dimensional 2-means (Lloyd), deterministically initialized at
/// (min, max). Values equidistant from both centroids go to the lo cluster.
/// Iterates to the exact assignment fixed point: on return every label
/// names the nearer centroid and every centroid is the mean of its values.
/// With min/max initialization both clusters stay nonempty throughout.
///
/// Throws EmptyInput for fewer than 2 values and DegenerateInput when all
/// values are equal.
TwoMeansResult two_means_1d(std::span<const double> values, double tol = 0.5,
                            int max_iter = 100);

}  // namespace wordprep
