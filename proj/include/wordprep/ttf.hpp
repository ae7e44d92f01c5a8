#pragma once

#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <vector>

namespace wordprep::ttf {

/// One outline point in font units, y up. Off-curve points are quadratic
/// Bezier control points; consecutive off-curve points imply an on-curve
/// midpoint between them.
struct OutlinePoint {
  double x = 0.0;
  double y = 0.0;
  bool on_curve = true;
};

/// Closed contours in font units. Composite glyphs are resolved into the
/// component outlines before this is returned.
struct GlyphOutline {
  std::vector<std::vector<OutlinePoint>> contours;
};

/// Minimal TrueType font: cmap lookup, horizontal metrics and glyf
/// outlines, which is everything word rendering needs. Fonts with CFF
/// (PostScript) outlines are rejected at load. Instances are immutable and
/// safe to share across threads.
class Font {
 public:
  static Font load(const std::filesystem::path& path);

  int units_per_em() const { return units_per_em_; }
  int ascender() const { return ascender_; }    // font units, positive up
  int descender() const { return descender_; }  // font units, usually negative
  uint16_t glyph_count() const { return num_glyphs_; }

  /// Glyph id for a Unicode scalar value; 0 (.notdef) when unmapped.
  uint16_t glyph_index(char32_t cp) const;

  /// Horizontal advance in font units.
  uint16_t advance_width(uint16_t glyph_id) const;

  GlyphOutline glyph_outline(uint16_t glyph_id) const;

 private:
  Font() = default;
  GlyphOutline outline_recursive(uint16_t glyph_id, int depth) const;

  std::vector<uint8_t> data_;
  uint16_t num_glyphs_ = 0;
  int units_per_em_ = 1000;
  int ascender_ = 0;
  int descender_ = 0;
  bool long_loca_ = false;
  uint16_t num_hmetrics_ = 0;
  size_t loca_off_ = 0, loca_len_ = 0;
  size_t glyf_off_ = 0, glyf_len_ = 0;
  size_t hmtx_off_ = 0, hmtx_len_ = 0;
  std::unordered_map<uint32_t, uint16_t> cmap_;
};

/// Directed line segment in image coordinates (y down), used by the
/// coverage rasterizer.
struct Edge {
  double x0, y0, x1, y1;
};

/// Flattens an outline into edges. Image coordinates are
/// x = origin_x + p.x * scale, y = origin_y - p.y * scale.
void append_outline_edges(const GlyphOutline& outline, double scale, double origin_x,
                          double origin_y, std::vector<Edge>& edges);

/// Anti-aliased nonzero-winding coverage, 8 sub-scanlines per pixel row
/// with exact horizontal span coverage. Returns width*height values in
/// [0, 1], row-major.
std::vector<float> rasterize_coverage(const std::vector<Edge>& edges, int width, int height);

}  // namespace wordprep::ttf
