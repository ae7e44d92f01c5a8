#include "wordprep/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "wordprep/errors.hpp"
#include "wordprep/parallel.hpp"
#include "wordprep/png_io.hpp"
#include "wordprep/rng.hpp"
#include "wordprep/utf8.hpp"

namespace wordprep {

namespace {

std::pair<int, int> parse_range(const nlohmann::json& j, const std::string& key,
                                std::pair<int, int> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw DataError("generator config: '" + key + "' must be an integer pair [min, max]");
  }
  std::pair<int, int> r{v[0].get<int>(), v[1].get<int>()};
  if (r.first > r.second) {
    throw DataError("generator config: '" + key + "' range is empty (min > max)");
  }
  return r;
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir,
                                                const std::set<std::string>& extensions) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("asset directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    if (extensions.count(ext)) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

constexpr int kMaxRenderAttempts = 20;

}  // namespace

GeneratorConfig parse_generator_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open generator config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("generator config " + path.string() + ": " + e.what());
  }
  for (const char* key : {"fonts_dir", "backgrounds_dir", "lexicon_path"}) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw DataError("generator config " + path.string() + ": missing string field '" +
                      std::string(key) + "'");
    }
  }
  GeneratorConfig config;
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  config.fonts_dir = resolve(j.at("fonts_dir").get<std::string>());
  config.backgrounds_dir = resolve(j.at("backgrounds_dir").get<std::string>());
  config.lexicon_path = resolve(j.at("lexicon_path").get<std::string>());
  config.font_size_range = parse_range(j, "font_size_range", config.font_size_range);
  config.text_intensity_range =
      parse_range(j, "text_intensity_range", config.text_intensity_range);
  config.background_brightness_shift_range = parse_range(
      j, "background_brightness_shift_range", config.background_brightness_shift_range);
  if (j.contains("margin")) config.margin = j.at("margin").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<uint64_t>();

  if (config.font_size_range.first < 4) {
    throw DataError("generator config: font sizes below 4 px are not renderable");
  }
  auto clamp_check = [&](std::pair<int, int> r, const char* what, int lo, int hi) {
    if (r.first < lo || r.second > hi) {
      throw DataError(std::string("generator config: ") + what + " range must lie in [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };
  clamp_check(config.text_intensity_range, "text_intensity", 0, 255);
  clamp_check(config.background_brightness_shift_range, "background_brightness_shift", -255,
              255);
  if (config.margin < 0) throw DataError("generator config: margin must be >= 0");
  return config;
}

GlyphMask render_word(const std::string& word, const ttf::Font& font, double size_px,
                      int margin) {
  const std::u32string codepoints = decode_utf8(word);
  if (codepoints.empty()) throw UnrenderableWord("empty word");

  const double scale = size_px / double(font.units_per_em());

  struct Placed {
    ttf::GlyphOutline outline;
    double pen_x;
  };
  std::vector<Placed> glyphs;
  glyphs.reserve(codepoints.size());
  double pen = 0.0;
  for (char32_t cp : codepoints) {
    const uint16_t gid = font.glyph_index(cp);
    if (gid == 0) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "U+%04X", unsigned(cp));
      throw UnrenderableWord("font has no glyph for " + std::string(buf) + " in word '" + word +
                             "'");
    }
    glyphs.push_back(Placed{font.glyph_outline(gid), pen});
    pen += font.advance_width(gid) * scale;
  }

  // Canvas covers the font's line box plus any ink overshoot; outline
  // control points give a conservative hull.
  double ink_min_x = 0.0, ink_max_x = pen;
  double ink_min_y = -font.ascender() * scale;
  double ink_max_y = -font.descender() * scale;
  for (const auto& g : glyphs) {
    for (const auto& contour : g.outline.contours) {
      for (const auto& p : contour) {
        const double x = g.pen_x + p.x * scale;
        const double y = -p.y * scale;
        ink_min_x = std::min(ink_min_x, x);
        ink_max_x = std::max(ink_max_x, x);
        ink_min_y = std::min(ink_min_y, y);
        ink_max_y = std::max(ink_max_y, y);
      }
    }
  }
  const int x0 = int(std::floor(ink_min_x)) - margin;
  const int x1 = int(std::ceil(ink_max_x)) + margin;
  const int y0 = int(std::floor(ink_min_y)) - margin;
  const int y1 = int(std::ceil(ink_max_y)) + margin;
  const int width = std::max(x1 - x0, 1);
  const int height = std::max(y1 - y0, 1);

  std::vector<ttf::Edge> edges;
  for (const auto& g : glyphs) {
    ttf::append_outline_edges(g.outline, scale, g.pen_x - x0, -double(y0), edges);
  }

  GlyphMask mask;
  mask.width = width;
  mask.height = height;
  mask.alpha = ttf::rasterize_coverage(edges, width, height);

  int top = -1, bottom = -1;
  for (int r = 0; r < height; ++r) {
    bool any = false;
    for (int c = 0; c < width; ++c) {
      if (mask.at(r, c) > 0.0f) {
        any = true;
        break;
      }
    }
    if (any) {
      if (top < 0) top = r;
      bottom = r;
    }
  }
  if (top < 0) throw UnrenderableWord("word '" + word + "' rendered with no visible ink");
  mask.glyph_top = top;
  mask.glyph_bottom = bottom;
  return mask;
}

GrayImage compose(const GlyphMask& mask, const GrayImage& background, uint8_t text_intensity) {
  if (mask.width != background.width() || mask.height != background.height()) {
    throw std::invalid_argument("compose: mask " + std::to_string(mask.width) + "x" +
                                std::to_string(mask.height) + " vs background " +
                                std::to_string(background.width()) + "x" +
                                std::to_string(background.height()));
  }
  GrayImage out(mask.width, mask.height);
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const double a = mask.at(r, c);
      out(r, c) = round_to_u8(a * text_intensity + (1.0 - a) * background(r, c));
    }
  }
  return out;
}

GeneratorAssets load_assets(const GeneratorConfig& config) {
  GeneratorAssets assets;

  const auto font_files = sorted_files(config.fonts_dir, {".ttf", ".otf"});
  if (font_files.empty()) {
    throw DataError("no font files (.ttf/.otf) in " + config.fonts_dir.string());
  }
  for (const auto& f : font_files) {
    assets.fonts.push_back(ttf::Font::load(f));
    assets.font_names.push_back(f.filename().string());
  }

  const auto background_files = sorted_files(config.backgrounds_dir, {".png"});
  if (background_files.empty()) {
    throw DataError("no background PNGs in " + config.backgrounds_dir.string());
  }
  for (const auto& b : background_files) assets.backgrounds.push_back(read_gray_png(b));

  std::ifstream lex(config.lexicon_path, std::ios::binary);
  if (!lex) throw DataError("cannot open lexicon " + config.lexicon_path.string());
  std::string line;
  while (std::getline(lex, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) assets.words.push_back(line);
  }
  if (assets.words.empty()) {
    throw DataError("lexicon " + config.lexicon_path.string() + " has no words");
  }
  return assets;
}

GeneratedItem generate_item(const GeneratorConfig& config, const GeneratorAssets& assets,
                            uint64_t index) {
  Rng rng(mix_seed(config.seed, index));

  for (int attempt = 0; attempt < kMaxRenderAttempts; ++attempt) {
    const std::string& word = assets.words[rng.uniform_u32(uint32_t(assets.words.size()))];
    const ttf::Font& font = assets.fonts[rng.uniform_u32(uint32_t(assets.fonts.size()))];
    const int size = rng.uniform_int(config.font_size_range.first, config.font_size_range.second);
    const int text_intensity =
        rng.uniform_int(config.text_intensity_range.first, config.text_intensity_range.second);

    GlyphMask mask;
    try {
      mask = render_word(word, font, double(size), config.margin);
    } catch (const UnrenderableWord&) {
      continue;  // re-draw everything from the same per-item stream
    }

    const GrayImage& bg_src =
        assets.backgrounds[rng.uniform_u32(uint32_t(assets.backgrounds.size()))];
    const int shift = rng.uniform_int(config.background_brightness_shift_range.first,
                                      config.background_brightness_shift_range.second);

    // Upscale backgrounds that are smaller than the mask so a patch of the
    // right size always exists.
    GrayImage bg = bg_src;
    if (bg.width() < mask.width || bg.height() < mask.height) {
      bg = resize_bilinear(bg_src, std::max(bg.width(), mask.width),
                           std::max(bg.height(), mask.height));
    }
    const int max_x = bg.width() - mask.width;
    const int max_y = bg.height() - mask.height;
    const int patch_x = max_x > 0 ? rng.uniform_int(0, max_x) : 0;
    const int patch_y = max_y > 0 ? rng.uniform_int(0, max_y) : 0;
    GrayImage patch = crop_rect(bg, patch_y, patch_x, mask.height, mask.width);
    if (shift != 0) {
      for (auto& v : patch.data()) v = uint8_t(std::clamp(int(v) + shift, 0, 255));
    }

    return GeneratedItem{compose(mask, patch, uint8_t(text_intensity)), word};
  }
  throw DataError("generate_item: gave up after " + std::to_string(kMaxRenderAttempts) +
                  " unrenderable draws for item " + std::to_string(index) +
                  " (fonts and lexicon are incompatible?)");
}

Manifest generate_dataset(const GeneratorConfig& config, size_t count,
                          const std::filesystem::path& out_dir, int jobs) {
  const GeneratorAssets assets = load_assets(config);
  std::filesystem::create_directories(out_dir);

  std::vector<std::string> names(count);
  std::vector<std::string> words(count);
  parallel_for(count, jobs, [&](size_t i) {
    GeneratedItem item = generate_item(config, assets, uint64_t(i));
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu.png", i);
    write_gray_png(item.image, out_dir / buf);
    names[i] = buf;
    words[i] = std::move(item.word);
  });

  Manifest manifest;
  manifest.entries.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    manifest.entries.push_back(ManifestEntry{names[i], words[i], Split::train});
  }
  write_manifest(manifest, out_dir / "manifest.jsonl");
  return manifest;
}

}  // namespace wordprep
