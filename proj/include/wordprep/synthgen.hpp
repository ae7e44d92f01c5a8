#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wordprep/image.hpp"
#include "wordprep/manifest.hpp"
#include "wordprep/ttf.hpp"

namespace wordprep {

/// Generator knobs. Asset directories are scanned in sorted filename order
/// so runs are reproducible regardless of directory enumeration order.
struct GeneratorConfig {
  std::filesystem::path fonts_dir;
  std::filesystem::path backgrounds_dir;
  std::filesystem::path lexicon_path;
  std::pair<int, int> font_size_range{18, 48};              // px
  std::pair<int, int> text_intensity_range{0, 100};         // dark text on light paper
  std::pair<int, int> background_brightness_shift_range{-30, 30};
  int margin = 4;  // px around the glyphs
  uint64_t seed = 0;
};

/// Parses the generator config JSON file; see the README for the schema.
GeneratorConfig parse_generator_config(const std::filesystem::path& path);

/// Anti-aliased word coverage mask plus the tight vertical ink bounds.
struct GlyphMask {
  int width = 0;
  int height = 0;
  std::vector<float> alpha;  // row-major, [0, 1]
  int glyph_top = 0;         // first row with nonzero coverage
  int glyph_bottom = 0;      // last row with nonzero coverage

  float at(int row, int col) const {
    return alpha[size_t(row) * size_t(width) + size_t(col)];
  }
};

/// Rasterizes a word left-to-right with the font's native advance widths
/// at `size_px` pixels per em, margin added on all sides. The mask's
/// vertical extent covers the font's ascender..descender line box (plus
/// any ink overshoot), so the word sits at a realistic baseline.
/// Throws UnrenderableWord when the font lacks a glyph for some character
/// or the rendering carries no ink.
GlyphMask render_word(const std::string& word, const ttf::Font& font, double size_px,
                      int margin = 4);

/// out = round(alpha * text_intensity + (1 - alpha) * background), per
/// pixel. Dimensions must match.
GrayImage compose(const GlyphMask& mask, const GrayImage& background, uint8_t text_intensity);

/// Assets loaded once and shared (read-only) by all generation workers.
struct GeneratorAssets {
  std::vector<ttf::Font> fonts;
  std::vector<std::string> font_names;
  std::vector<GrayImage> backgrounds;
  std::vector<std::string> words;
};

/// Loads fonts, backgrounds and lexicon; throws DataError when any asset
/// class is empty or a file fails to parse.
GeneratorAssets load_assets(const GeneratorConfig& config);

struct GeneratedItem {
  GrayImage image;
  std::string word;
};

/// Generates item `index` of the virtual dataset. All random draws come
/// from an RNG seeded by (config.seed, index), so any item can be produced
/// independently of the others and of the total count.
GeneratedItem generate_item(const GeneratorConfig& config, const GeneratorAssets& assets,
                            uint64_t index);

/// Generates `count` boxes into out_dir (PNG files named by zero-padded
/// index) plus out_dir/manifest.jsonl, and returns the manifest. Items may
/// be generated in parallel; the result is identical for any job count.
Manifest generate_dataset(const GeneratorConfig& config, size_t count,
                          const std::filesystem::path& out_dir, int jobs = 1);

}  // namespace wordprep
