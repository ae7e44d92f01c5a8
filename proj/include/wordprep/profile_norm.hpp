#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>

#include "wordprep/image.hpp"
#include "wordprep/manifest.hpp"

namespace wordprep {

/// Vertical extent of the word inside its box: first through last row
/// classified as text.
struct WordBand {
  int top_row = 0;
  int bottom_row = 0;  // inclusive

  int profile_height() const { return bottom_row - top_row + 1; }
  bool operator==(const WordBand&) const = default;
};

enum class NoTextPolicy {
  plain_resize,  // blank boxes pass through resized to the box height
  reject,        // blank boxes raise NoTextFound
};

struct NormalizationParams {
  int target_profile_height = 20;
  int target_box_height = 32;
  double min_contrast = 8.0;  // minimum |centroid_hi - centroid_lo| to accept a band
  NoTextPolicy no_text = NoTextPolicy::plain_resize;
  // Bands already within this many pixels of the target keep scale 1.0, so
  // normalizing an already-normalized box is a no-op rather than a fresh
  // resample; this is what makes the operation idempotent in practice.
  int scale_snap_px = 1;
};

/// Audit record of what one normalization did. At most one of the pad pair
/// and the crop pair is nonzero.
struct NormalizationReport {
  WordBand detected_band{};
  double scale_factor = 1.0;
  int pad_top = 0;
  int pad_bottom = 0;
  int crop_top = 0;
  int crop_bottom = 0;
  uint8_t fill_intensity = 0;
  bool no_text_fallback = false;
};

/// Finds the word's vertical band: clusters per-row mean intensities into
/// two groups, picks the cluster whose centroid is farther from the border
/// background estimate as text, and spans the first through last text row.
/// Throws NoTextFound for blank or low-contrast boxes.
WordBand detect_word_band(const GrayImage& img, double min_contrast = 8.0);

/// Scales the box uniformly so the detected band height matches
/// target_profile_height, then pads (with the background estimate) or
/// crops so the band center sits on the output center row and the output
/// height is exactly target_box_height.
std::pair<GrayImage, NormalizationReport> normalize_profile(
    const GrayImage& img, const NormalizationParams& params = {});

struct NormalizeDatasetResult {
  Manifest manifest;   // written to out_dir/manifest.jsonl as well
  size_t normalized = 0;
  size_t fallbacks = 0;  // NoTextFound boxes passed through
  size_t failures = 0;   // undecodable images, skipped and reported
};

/// Normalizes every entry of every split, writing images under out_dir
/// (same relative paths), the output manifest, and a JSON-lines report
/// sidecar (normalize_report.jsonl: one object per image plus a summary
/// line). Missing files abort; undecodable files are recorded and skipped.
/// Entries may be processed in parallel; output is identical for any job
/// count.
NormalizeDatasetResult normalize_dataset(const Manifest& manifest,
                                         const std::filesystem::path& manifest_dir,
                                         const NormalizationParams& params,
                                         const std::filesystem::path& out_dir, int jobs = 1);

}  // namespace wordprep
