#include "wordprep/profile_norm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wordprep/errors.hpp"
#include "wordprep/kmeans1d.hpp"
#include "wordprep/parallel.hpp"
#include "wordprep/png_io.hpp"

namespace wordprep {

WordBand detect_word_band(const GrayImage& img, double min_contrast) {
  const RowProfile profile = row_profile(img);

  // The cluster split gates blank boxes and tells text from paper; the
  // band extent itself comes from a threshold anchored to the profile peak
  // below. Cluster labels alone are too population-sensitive for the
  // extent: padding or cropping background rows moves the Lloyd boundary,
  // so a box and its normalized form could disagree about rows that are
  // only partially inked (ascenders, descenders).
  TwoMeansResult clusters;
  try {
    clusters = two_means_1d(profile);
  } catch (const DegenerateInput&) {
    throw NoTextFound("box has no intensity contrast between rows");
  } catch (const EmptyInput&) {
    throw NoTextFound("box has too few rows to detect a band");
  }
  if (clusters.centroid_hi - clusters.centroid_lo < min_contrast) {
    throw NoTextFound("row contrast " +
                      std::to_string(clusters.centroid_hi - clusters.centroid_lo) +
                      " below minimum " + std::to_string(min_contrast));
  }

  const double background = estimate_background(img);

  // Text lies on the side of the background where the farther centroid
  // sits. A row is text when it deviates from the background estimate, on
  // that side, by at least half the profile's peak deviation. Relative row
  // coverage is invariant under uniform rescaling, so the same rows
  // qualify before and after normalization.
  const bool text_is_dark =
      std::abs(clusters.centroid_lo - background) >= std::abs(clusters.centroid_hi - background);
  double peak_dev = 0.0;
  for (const double mean : profile) {
    const double dev = text_is_dark ? background - mean : mean - background;
    peak_dev = std::max(peak_dev, dev);
  }

  int top = -1, bottom = -1;
  for (size_t r = 0; r < profile.size(); ++r) {
    const double dev = text_is_dark ? background - profile[r] : profile[r] - background;
    if (dev >= peak_dev / 2.0 && dev > 0.0) {
      if (top < 0) top = int(r);
      bottom = int(r);
    }
  }
  if (top < 0) throw NoTextFound("no row classified as text");
  return WordBand{top, bottom};
}

std::pair<GrayImage, NormalizationReport> normalize_profile(const GrayImage& img,
                                                            const NormalizationParams& params) {
  if (params.target_profile_height < 1 ||
      params.target_profile_height > params.target_box_height) {
    throw std::invalid_argument(
        "normalize_profile: need 1 <= target_profile_height <= target_box_height");
  }

  NormalizationReport report;
  const int box_height = params.target_box_height;

  WordBand band;
  try {
    band = detect_word_band(img, params.min_contrast);
  } catch (const NoTextFound&) {
    if (params.no_text == NoTextPolicy::reject) throw;
    // Fallback: plain resize to the box height, flagged in the report.
    const double s = double(box_height) / double(img.height());
    const int new_width = std::max(int(std::llround(img.width() * s)), 1);
    GrayImage out = resize_bilinear(img, new_width, box_height);
    report.no_text_fallback = true;
    report.scale_factor = s;
    report.fill_intensity = estimate_background(out);
    return {std::move(out), report};
  }
  report.detected_band = band;

  // Bands within scale_snap_px of the target keep scale 1: resampling for
  // a sub-pixel gain would only blur, and it keeps re-normalization from
  // drifting.
  double scale = 1.0;
  if (std::abs(band.profile_height() - params.target_profile_height) > params.scale_snap_px) {
    scale = double(params.target_profile_height) / double(band.profile_height());
  }
  report.scale_factor = scale;

  GrayImage scaled = scale == 1.0
                         ? img
                         : resize_bilinear(img, std::max(int(std::llround(img.width() * scale)), 1),
                                           std::max(int(std::llround(img.height() * scale)), 1));
  const uint8_t fill = estimate_background(scaled);
  report.fill_intensity = fill;

  // Band center in the scaled image (continuous row coordinates; row r
  // spans [r, r+1)).
  const double band_center = scale * (double(band.top_row + band.bottom_row + 1) / 2.0);
  const double target_center = double(box_height) / 2.0;

  GrayImage out = scaled;
  if (scaled.height() <= box_height) {
    const int pad_total = box_height - scaled.height();
    const int pad_top =
        int(std::clamp<long long>(std::llround(target_center - band_center), 0, pad_total));
    report.pad_top = pad_top;
    report.pad_bottom = pad_total - pad_top;
    if (pad_total > 0) out = pad_vertical(scaled, report.pad_top, report.pad_bottom, fill);
  } else {
    const int crop_total = scaled.height() - box_height;
    const int crop_top =
        int(std::clamp<long long>(std::llround(band_center - target_center), 0, crop_total));
    report.crop_top = crop_top;
    report.crop_bottom = crop_total - crop_top;
    out = crop_vertical(scaled, crop_top, crop_top + box_height - 1);
  }
  return {std::move(out), report};
}

namespace {

nlohmann::ordered_json report_json(const std::string& path, const NormalizationReport& r) {
  nlohmann::ordered_json j;
  j["path"] = path;
  j["ok"] = true;
  j["no_text_fallback"] = r.no_text_fallback;
  if (!r.no_text_fallback) {
    j["band_top"] = r.detected_band.top_row;
    j["band_bottom"] = r.detected_band.bottom_row;
    j["profile_height"] = r.detected_band.profile_height();
  }
  j["scale_factor"] = r.scale_factor;
  j["pad_top"] = r.pad_top;
  j["pad_bottom"] = r.pad_bottom;
  j["crop_top"] = r.crop_top;
  j["crop_bottom"] = r.crop_bottom;
  j["fill_intensity"] = int(r.fill_intensity);
  return j;
}

}  // namespace

NormalizeDatasetResult normalize_dataset(const Manifest& manifest,
                                         const std::filesystem::path& manifest_dir,
                                         const NormalizationParams& params,
                                         const std::filesystem::path& out_dir, int jobs) {
  // Missing files abort before any work; decode failures are per-item.
  for (const auto& entry : manifest.entries) {
    const auto p = manifest_dir / entry.path;
    if (!std::filesystem::exists(p)) {
      throw DataError("normalize_dataset: missing image " + p.string());
    }
  }
  std::filesystem::create_directories(out_dir);

  struct ItemResult {
    bool ok = false;
    std::string error;
    NormalizationReport report;
  };
  std::vector<ItemResult> results(manifest.entries.size());

  parallel_for(manifest.entries.size(), jobs, [&](size_t i) {
    const auto& entry = manifest.entries[i];
    ItemResult& slot = results[i];
    GrayImage img(1, 1);
    try {
      img = read_gray_png(manifest_dir / entry.path);
    } catch (const ImageIoError& e) {
      slot.error = e.what();
      return;
    }
    auto [out, report] = normalize_profile(img, params);
    const auto out_path = out_dir / entry.path;
    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    write_gray_png(out, out_path);
    slot.ok = true;
    slot.report = report;
  });

  NormalizeDatasetResult result;
  std::ofstream report_out(out_dir / "normalize_report.jsonl", std::ios::binary | std::ios::trunc);
  if (!report_out) {
    throw DataError("cannot write report sidecar under " + out_dir.string());
  }
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& entry = manifest.entries[i];
    const auto& slot = results[i];
    if (slot.ok) {
      result.manifest.entries.push_back(entry);
      if (slot.report.no_text_fallback) {
        ++result.fallbacks;
      } else {
        ++result.normalized;
      }
      report_out << report_json(entry.path, slot.report).dump() << '\n';
    } else {
      ++result.failures;
      nlohmann::ordered_json j;
      j["path"] = entry.path;
      j["ok"] = false;
      j["error"] = slot.error;
      report_out << j.dump() << '\n';
    }
  }
  nlohmann::ordered_json summary;
  summary["summary"] = {{"total", manifest.entries.size()},
                        {"normalized", result.normalized},
                        {"no_text_fallbacks", result.fallbacks},
                        {"failed", result.failures}};
  report_out << summary.dump() << '\n';

  write_manifest(result.manifest, out_dir / "manifest.jsonl");
  return result;
}

}  // namespace wordprep
