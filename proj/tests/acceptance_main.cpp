// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Run via ctest (test name "acceptance") or directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "wordprep/augment.hpp"
#include "wordprep/errors.hpp"
#include "wordprep/image.hpp"
#include "wordprep/kmeans1d.hpp"
#include "wordprep/manifest.hpp"
#include "wordprep/metrics.hpp"
#include "wordprep/profile_norm.hpp"
#include "wordprep/png_io.hpp"
#include "wordprep/synthgen.hpp"
#include "wordprep/utf8.hpp"

using namespace wordprep;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Normalization geometry over 1,000 generated boxes (seed 42): every
//    successfully normalized output is exactly 32 rows tall and re-detection
//    finds a profile height of 20 +/- 1 px on >= 98%. Single-threaded < 60 s.
void criterion_1(const GeneratorConfig& config, const GeneratorAssets& assets) {
  const auto start = std::chrono::steady_clock::now();
  const NormalizationParams params;
  int produced = 0, fallbacks = 0, bad_height = 0, redetect_total = 0, redetect_ok = 0;
  for (uint64_t i = 0; i < 1000; ++i) {
    const GeneratedItem item = generate_item(config, assets, i);
    const auto [out, rep] = normalize_profile(item.image, params);
    ++produced;
    if (out.height() != params.target_box_height) ++bad_height;
    if (rep.no_text_fallback) {
      ++fallbacks;
      continue;
    }
    ++redetect_total;
    try {
      const WordBand band = detect_word_band(out, params.min_contrast);
      if (std::abs(band.profile_height() - params.target_profile_height) <= 1) ++redetect_ok;
    } catch (const NoTextFound&) {
    }
  }
  const double elapsed = seconds_since(start);
  const double redetect_rate = redetect_total ? double(redetect_ok) / redetect_total : 0.0;
  const bool pass =
      produced == 1000 && bad_height == 0 && redetect_rate >= 0.98 && elapsed < 60.0;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "1000 boxes, %d wrong heights, %d fallbacks, re-detect 20+/-1 on %.1f%% "
                "(need >= 98%%), %.1f s (need < 60)",
                bad_height, fallbacks, 100.0 * redetect_rate, elapsed);
  report(1, "normalization geometry", pass, detail);
}

// ---------------------------------------------------------------------------
// 2. two_means_1d equals the exhaustive sorted-threshold optimum on 500
//    well-separated instances (gap > 3x group diameter, sizes 4-64).
std::vector<int> threshold_scan_oracle(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  double best_cost = std::numeric_limits<double>::infinity();
  size_t best_split = 1;
  for (size_t split = 1; split < order.size(); ++split) {
    double cost = 0.0;
    for (const bool low : {true, false}) {
      const size_t begin = low ? 0 : split;
      const size_t end = low ? split : order.size();
      double mean = 0.0;
      for (size_t i = begin; i < end; ++i) mean += values[order[i]];
      mean /= double(end - begin);
      for (size_t i = begin; i < end; ++i) {
        cost += (values[order[i]] - mean) * (values[order[i]] - mean);
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_split = split;
    }
  }
  std::vector<int> labels(values.size(), 1);
  for (size_t i = 0; i < best_split; ++i) labels[order[i]] = 0;
  return labels;
}

void criterion_2() {
  Rng rng(4242);
  int matched = 0;
  const int instances = 500;
  for (int n = 0; n < instances; ++n) {
    const size_t count = size_t(rng.uniform_int(4, 64));
    const double diameter = rng.uniform_real(0.5, 20.0);
    const double lo_center = rng.uniform_real(diameter, 80.0);
    const double hi_center =
        lo_center + 3.0 * diameter + rng.uniform_real(1.0, 40.0) + diameter;
    std::vector<double> values;
    for (size_t i = 0; i < count; ++i) {
      const double center = i < count / 2 ? lo_center : hi_center;
      values.push_back(center + rng.uniform_real(-diameter / 2, diameter / 2));
    }
    if (count / 2 < 2) {
      values[0] = lo_center;
      values[1] = hi_center;
    }
    if (two_means_1d(values).labels == threshold_scan_oracle(values)) ++matched;
  }
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d/%d instances match the global optimum", matched,
                instances);
  report(2, "k-means oracle equivalence", matched == instances, detail);
}

// ---------------------------------------------------------------------------
// 3. Idempotence on 200 generated boxes: second normalization has scale in
//    [0.9, 1.1] and per-pixel |delta| <= 2 on >= 99% of pixels per image.
void criterion_3(const GeneratorConfig& config, const GeneratorAssets& assets) {
  const NormalizationParams params;
  int boxes_ok = 0, scale_bad = 0;
  const int total = 200;
  for (uint64_t i = 0; i < total; ++i) {
    const GeneratedItem item = generate_item(config, assets, 100000 + i);
    const auto [once, r1] = normalize_profile(item.image, params);
    const auto [twice, r2] = normalize_profile(once, params);
    if (r2.scale_factor < 0.9 || r2.scale_factor > 1.1) {
      ++scale_bad;
      continue;
    }
    // Compare over the centered common region when widths differ.
    const int w = std::min(once.width(), twice.width());
    const int off1 = (once.width() - w) / 2;
    const int off2 = (twice.width() - w) / 2;
    size_t off_pixels = 0, counted = 0;
    for (int r = 0; r < once.height(); ++r) {
      for (int c = 0; c < w; ++c) {
        ++counted;
        if (std::abs(int(once(r, c + off1)) - int(twice(r, c + off2))) > 2) ++off_pixels;
      }
    }
    if (off_pixels * 100 <= counted) ++boxes_ok;
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d/%d boxes idempotent within tolerance (%d scale violations)", boxes_ok, total,
                scale_bad);
  report(3, "idempotence", boxes_ok == total, detail);
}

// ---------------------------------------------------------------------------
// 4. Determinism: two generate runs give byte-identical trees; jobs=8
//    matches jobs=1; apply_policy is bit-identical for fixed (seed, index).
std::map<std::string, std::string> tree_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    out[fs::relative(entry.path(), dir).string()] =
        std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }
  return out;
}

void criterion_4(const fs::path& root, GeneratorConfig config) {
  config.seed = 4711;
  generate_dataset(config, 1000, root / "det_a", 1);
  generate_dataset(config, 1000, root / "det_b", 1);
  generate_dataset(config, 1000, root / "det_c", 8);
  const auto a = tree_bytes(root / "det_a");
  const bool rerun_identical = a == tree_bytes(root / "det_b");
  const bool jobs_identical = a == tree_bytes(root / "det_c");

  const AugmentationPolicy policy = parse_policy_text(R"({
    "seed": 555,
    "specs": [
      {"kind": "gaussian_noise", "probability": 1.0, "params": {"stddev": [3, 9]}},
      {"kind": "rotate", "probability": 0.7, "params": {"degrees": [-6, 6]}},
      {"kind": "shadow_gradient", "probability": 0.7, "params": {"direction": [0, 3], "min_gain": [0.5, 0.9]}},
      {"kind": "salt_pepper", "probability": 0.5, "params": {"fraction": [0.0, 0.03]}}
    ]})");
  const GrayImage sample = read_gray_png(root / "det_a" / "000000.png");
  bool policy_identical = true;
  for (uint64_t idx = 0; idx < 16; ++idx) {
    if (!(apply_policy(sample, policy, idx) == apply_policy(sample, policy, idx))) {
      policy_identical = false;
    }
  }
  const bool pass = rerun_identical && jobs_identical && policy_identical;
  std::string detail = std::string("rerun ") + (rerun_identical ? "identical" : "DIFFERS") +
                       ", jobs 1 vs 8 " + (jobs_identical ? "identical" : "DIFFERS") +
                       ", apply_policy " + (policy_identical ? "identical" : "DIFFERS");
  report(4, "determinism", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. Composition identities hold exactly; morphology matches the 8x8
//    brute-force min/max oracle exactly.
GrayImage morph_oracle(const GrayImage& img, bool take_min) {
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      int best = take_min ? 255 : 0;
      for (int rr = r - 1; rr <= r + 1; ++rr) {
        for (int cc = c - 1; cc <= c + 1; ++cc) {
          if (rr < 0 || rr >= img.height() || cc < 0 || cc >= img.width()) continue;
          best = take_min ? std::min(best, int(img(rr, cc))) : std::max(best, int(img(rr, cc)));
        }
      }
      out(r, c) = uint8_t(best);
    }
  }
  return out;
}

void criterion_5() {
  bool pass = true;
  std::string failure;

  Rng rng(55);
  const GrayImage bg = testsup::random_image(rng, 9, 7);
  GlyphMask mask;
  mask.width = 9;
  mask.height = 7;
  mask.alpha.assign(63, 0.0f);
  if (!(compose(mask, bg, 40) == bg)) {
    pass = false;
    failure = "alpha=0 did not preserve the background";
  }
  mask.alpha.assign(63, 1.0f);
  const GrayImage opaque = compose(mask, bg, 0);
  if (!std::all_of(opaque.data().begin(), opaque.data().end(),
                   [](uint8_t v) { return v == 0; })) {
    pass = false;
    failure = "alpha=1 with intensity 0 is not all black";
  }
  mask.alpha.assign(63, 0.5f);
  const GrayImage mid = compose(mask, GrayImage(9, 7, 200), 0);
  if (!std::all_of(mid.data().begin(), mid.data().end(), [](uint8_t v) { return v == 100; })) {
    pass = false;
    failure = "midpoint composition is not exactly 100";
  }

  int morph_mismatches = 0;
  for (int n = 0; n < 100; ++n) {
    const GrayImage img = testsup::random_image(rng, 8, 8);
    if (!(erode(img) == morph_oracle(img, true))) ++morph_mismatches;
    if (!(dilate(img) == morph_oracle(img, false))) ++morph_mismatches;
  }
  if (morph_mismatches > 0) {
    pass = false;
    failure = std::to_string(morph_mismatches) + " morphology oracle mismatches";
  }
  report(5, "composition and morphology identities", pass,
         pass ? "alpha 0/1/0.5 exact; 200 min/max oracle comparisons exact" : failure);
}

// ---------------------------------------------------------------------------
// 6. Metric suite: levenshtein vs the naive recursive oracle on 1,000 short
//    pairs; metric axioms on 10,000 triples; word accuracy counting.
size_t lev_oracle(const std::u32string& a, const std::u32string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  return std::min({lev_oracle(a.substr(1), b) + 1, lev_oracle(a, b.substr(1)) + 1,
                   lev_oracle(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1)});
}

std::string random_word(Rng& rng, size_t max_len) {
  static const std::string alphabet = "abcdeXY01";
  std::string s;
  const size_t len = rng.uniform_u32(uint32_t(max_len + 1));
  for (size_t i = 0; i < len; ++i) {
    s.push_back(alphabet[rng.uniform_u32(uint32_t(alphabet.size()))]);
  }
  return s;
}

void criterion_6() {
  Rng rng(66);
  int oracle_mismatch = 0;
  for (int n = 0; n < 1000; ++n) {
    const std::string a = random_word(rng, 8);
    const std::string b = random_word(rng, 8);
    if (levenshtein(a, b) != lev_oracle(decode_utf8(a), decode_utf8(b))) ++oracle_mismatch;
  }

  int axiom_violations = 0;
  for (int n = 0; n < 10000; ++n) {
    const std::string a = random_word(rng, 7);
    const std::string b = random_word(rng, 7);
    const std::string c = random_word(rng, 7);
    if (levenshtein(a, b) != levenshtein(b, a)) ++axiom_violations;
    if ((levenshtein(a, b) == 0) != (a == b)) ++axiom_violations;
    if (levenshtein(a, c) > levenshtein(a, b) + levenshtein(b, c)) ++axiom_violations;
  }

  Manifest m;
  m.entries.push_back(ManifestEntry{"a.png", "alpha", Split::test});
  m.entries.push_back(ManifestEntry{"b.png", "Beta", Split::test});
  m.entries.push_back(ManifestEntry{"c.png", "gamma", Split::test});
  m.entries.push_back(ManifestEntry{"d.png", "delta", Split::test});
  PredictionSet preds{{"a.png", "alpha"}, {"b.png", "beta"}, {"c.png", "wrong"}};
  const ScoreReport folded = word_accuracy(preds, m, Split::test, true);
  const ScoreReport strict = word_accuracy(preds, m, Split::test, false);
  const bool counting_ok = folded.word_accuracy == 0.5 && folded.n_missing == 1 &&
                           folded.n_scored == 3 && strict.word_accuracy == 0.25;

  const bool pass = oracle_mismatch == 0 && axiom_violations == 0 && counting_ok;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%d oracle mismatches, %d axiom violations, counting %s", oracle_mismatch,
                axiom_violations, counting_ok ? "exact" : "WRONG");
  report(6, "metric suite", pass, detail);
}

// ---------------------------------------------------------------------------
// 7. Subset nesting for the 5k..45k sweep over a 50k manifest: exact sizes,
//    each smaller sample contained in every larger one.
void criterion_7() {
  Manifest m;
  m.entries.reserve(50000);
  for (int i = 0; i < 50000; ++i) {
    m.entries.push_back(
        ManifestEntry{"img_" + std::to_string(i) + ".png", "w" + std::to_string(i), Split::train});
  }
  const uint64_t seed = 2024;
  const std::vector<size_t> sizes{5000, 10000, 15000, 25000, 35000, 45000};
  std::vector<std::set<std::string>> samples;
  bool sizes_ok = true;
  for (size_t size : sizes) {
    const Manifest sub = sample_subset(m, size, seed);
    std::set<std::string> paths;
    for (const auto& e : sub.entries) paths.insert(e.path);
    if (paths.size() != size) sizes_ok = false;
    samples.push_back(std::move(paths));
  }
  bool nested = true;
  for (size_t i = 0; i + 1 < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      if (!std::includes(samples[j].begin(), samples[j].end(), samples[i].begin(),
                         samples[i].end())) {
        nested = false;
      }
    }
  }
  report(7, "subset nesting", sizes_ok && nested,
         std::string("sizes ") + (sizes_ok ? "exact" : "WRONG") + ", nesting " +
             (nested ? "holds for all 15 pairs" : "VIOLATED"));
}

// ---------------------------------------------------------------------------
// 8. End-to-end proxy: a nearest-neighbor template recognizer over a 10-word
//    closed vocabulary scores higher on profile-normalized boxes than on
//    plain height-resized ones, on 500 moderately augmented test boxes.
//    Queries are generated with a spread of crop margins, the way real
//    detector boxes vary in tightness; both routes share the same
//    aspect-preserving canonical canvas so only the normalization differs.
GrayImage center_on_canvas(const GrayImage& img, int width) {
  const uint8_t fill = estimate_background(img);
  GrayImage out(width, img.height(), fill);
  const int offset = (width - img.width()) / 2;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const int oc = c + offset;
      if (oc >= 0 && oc < width) out(r, oc) = img(r, c);
    }
  }
  return out;
}

constexpr int kCanvasWidth = 150;

GrayImage canonical_norm(const GrayImage& box) {
  const auto [out, rep] = normalize_profile(box);
  return center_on_canvas(out, kCanvasWidth);
}

GrayImage canonical_plain(const GrayImage& box) {
  const int w = std::max(1, int(std::llround(box.width() * 32.0 / box.height())));
  return center_on_canvas(resize_bilinear(box, w, 32), kCanvasWidth);
}

double mse(const GrayImage& a, const GrayImage& b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.data().size(); ++i) {
    const double d = double(a.data()[i]) - double(b.data()[i]);
    sum += d * d;
  }
  return sum / double(a.data().size());
}

void criterion_8(const fs::path& root) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> vocab{"amount", "bright", "castle", "density", "effort",
                                       "garden", "hollow", "insight", "journey", "kitchen"};

  GeneratorConfig config;
  config.fonts_dir = testsup::font_dir();
  config.backgrounds_dir = root / "proxy_backgrounds";
  config.lexicon_path = root / "proxy_lexicon.txt";
  config.seed = 808;
  testsup::make_backgrounds(config.backgrounds_dir, 6, 1234);
  testsup::write_lexicon(config.lexicon_path, vocab);
  const GeneratorAssets assets = load_assets(config);

  // Clean templates: every font at three sizes per word.
  std::vector<GrayImage> templates_norm, templates_plain;
  std::vector<size_t> template_word;
  for (size_t w = 0; w < vocab.size(); ++w) {
    for (const auto& font : assets.fonts) {
      for (const double size : {22.0, 30.0, 38.0}) {
        const GlyphMask mask = render_word(vocab[w], font, size, config.margin);
        const GrayImage box = compose(mask, GrayImage(mask.width, mask.height, 230), 20);
        templates_norm.push_back(canonical_norm(box));
        templates_plain.push_back(canonical_plain(box));
        template_word.push_back(w);
      }
    }
  }

  const AugmentationPolicy policy = parse_policy_text(R"({
    "seed": 313,
    "specs": [
      {"kind": "gaussian_blur", "probability": 0.5, "params": {"sigma": [0.4, 1.0]}},
      {"kind": "gaussian_noise", "probability": 0.8, "params": {"stddev": [3, 8]}},
      {"kind": "shadow_gradient", "probability": 0.5, "params": {"direction": [0, 3], "min_gain": [0.6, 0.9]}},
      {"kind": "rotate", "probability": 0.3, "params": {"degrees": [-3, 3]}}
    ]})");

  const std::vector<int> query_margins{2, 6, 10, 14};
  int correct_norm = 0, correct_plain = 0;
  const int n_queries = 500;
  for (uint64_t i = 0; i < n_queries; ++i) {
    GeneratorConfig query_config = config;
    query_config.margin = query_margins[i % query_margins.size()];
    const GeneratedItem item = generate_item(query_config, assets, i);
    const GrayImage query = apply_policy(item.image, policy, i);
    size_t truth = vocab.size();
    for (size_t w = 0; w < vocab.size(); ++w) {
      if (vocab[w] == item.word) truth = w;
    }

    const GrayImage qn = canonical_norm(query);
    const GrayImage qp = canonical_plain(query);
    double best_norm = std::numeric_limits<double>::infinity();
    double best_plain = std::numeric_limits<double>::infinity();
    size_t arg_norm = 0, arg_plain = 0;
    for (size_t t = 0; t < templates_norm.size(); ++t) {
      const double dn = mse(qn, templates_norm[t]);
      if (dn < best_norm) {
        best_norm = dn;
        arg_norm = template_word[t];
      }
      const double dp = mse(qp, templates_plain[t]);
      if (dp < best_plain) {
        best_plain = dp;
        arg_plain = template_word[t];
      }
    }
    if (arg_norm == truth) ++correct_norm;
    if (arg_plain == truth) ++correct_plain;
  }
  const double acc_norm = double(correct_norm) / n_queries;
  const double acc_plain = double(correct_plain) / n_queries;
  const double elapsed = seconds_since(start);
  const bool pass = acc_norm > acc_plain && elapsed < 300.0;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "word accuracy with normalization %.3f vs without %.3f over %d boxes, %.1f s "
                "(need normalized > plain and < 300 s)",
                acc_norm, acc_plain, n_queries, elapsed);
  report(8, "end-to-end proxy (normalization helps)", pass, detail);
}

}  // namespace

int main() {
  testsup::TempDir tmp;
  const GeneratorConfig config = testsup::make_generator_config(tmp.path, 42);
  const GeneratorAssets assets = load_assets(config);

  criterion_1(config, assets);
  criterion_2();
  criterion_3(config, assets);
  criterion_4(tmp.path, config);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(tmp.path);

  if (g_failures == 0) {
    std::printf("all 8 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
