#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wordprep/image.hpp"
#include "wordprep/rng.hpp"

namespace wordprep {

enum class AugmentKind {
  gaussian_blur,
  motion_blur,
  gaussian_noise,
  salt_pepper,
  shadow_gradient,
  rotate,
  perspective,
  sheet_bend,
  erode,
  dilate,
  resolution_drop,
  crop_jitter,
  brightness_contrast,
};

std::string to_string(AugmentKind kind);

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// One probabilistic augmentation with uniform parameter ranges. Ranges
/// are validated when the policy is built, not per call.
struct AugmentationSpec {
  AugmentKind kind = AugmentKind::gaussian_blur;
  double probability = 0.0;
  std::map<std::string, ParamRange> params;
};

/// Ordered augmentation pipeline. Application order is the list order.
struct AugmentationPolicy {
  std::vector<AugmentationSpec> specs;
  uint64_t seed = 0;
};

/// Parses and validates the policy JSON (see README for the schema).
/// Unknown kinds, unknown or missing parameters, and out-of-range values
/// are rejected with a diagnostic naming the offending entry.
AugmentationPolicy parse_policy(const std::filesystem::path& path);
AugmentationPolicy parse_policy_text(const std::string& json_text);

/// Applies the policy to one image. Spec k draws its inclusion and
/// parameters from an RNG seeded by (policy.seed, item_index, k), so
/// results are reproducible and independent of batch composition.
GrayImage apply_policy(const GrayImage& img, const AugmentationPolicy& policy,
                       uint64_t item_index);

// Individual kernels. All are pure; the noisy ones draw from the given
// RNG. Geometric kernels resample bilinearly and fill exposed regions
// with the border background estimate.
GrayImage gaussian_blur(const GrayImage& img, double sigma);
GrayImage motion_blur(const GrayImage& img, double length, double angle_deg);
GrayImage gaussian_noise(const GrayImage& img, double stddev, Rng& rng);
GrayImage salt_pepper(const GrayImage& img, double fraction, Rng& rng);
GrayImage shadow_gradient(const GrayImage& img, int direction, double min_gain);
GrayImage rotate(const GrayImage& img, double degrees);
GrayImage perspective(const GrayImage& img, const std::array<double, 8>& corner_displacements);
GrayImage sheet_bend(const GrayImage& img, double amplitude, double wavelength);
GrayImage erode(const GrayImage& img);   // 3x3 min
GrayImage dilate(const GrayImage& img);  // 3x3 max
GrayImage resolution_drop(const GrayImage& img, double factor);
GrayImage crop_jitter(const GrayImage& img, double max_fraction, Rng& rng);
GrayImage brightness_contrast(const GrayImage& img, double gain, double bias);

}  // namespace wordprep
