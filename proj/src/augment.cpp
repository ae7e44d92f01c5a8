#include "wordprep/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "wordprep/errors.hpp"

namespace wordprep {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ParamDef {
  const char* name;
  double min;
  double max;
  bool min_exclusive = false;
};

struct KindDef {
  AugmentKind kind;
  const char* name;
  std::vector<ParamDef> params;
};

// Parameter names and the validation bounds enforced at policy build time.
const std::vector<KindDef>& kind_defs() {
  static const std::vector<KindDef> defs = {
      {AugmentKind::gaussian_blur, "gaussian_blur", {{"sigma", 0.0, 10.0, true}}},
      {AugmentKind::motion_blur, "motion_blur", {{"length", 1.0, 50.0}, {"angle", -180.0, 180.0}}},
      {AugmentKind::gaussian_noise, "gaussian_noise", {{"stddev", 0.0, 50.0}}},
      {AugmentKind::salt_pepper, "salt_pepper", {{"fraction", 0.0, 0.1}}},
      {AugmentKind::shadow_gradient,
       "shadow_gradient",
       {{"direction", 0.0, 3.0}, {"min_gain", 0.0, 1.0, true}}},
      {AugmentKind::rotate, "rotate", {{"degrees", -15.0, 15.0}}},
      {AugmentKind::perspective, "perspective", {{"max_shift_frac", 0.0, 0.1}}},
      {AugmentKind::sheet_bend,
       "sheet_bend",
       {{"amplitude", 0.0, 10.0}, {"wavelength", 8.0, 4096.0}}},
      {AugmentKind::erode, "erode", {}},
      {AugmentKind::dilate, "dilate", {}},
      {AugmentKind::resolution_drop, "resolution_drop", {{"factor", 0.0, 1.0, true}}},
      {AugmentKind::crop_jitter, "crop_jitter", {{"max_fraction", 0.0, 0.1}}},
      {AugmentKind::brightness_contrast,
       "brightness_contrast",
       {{"gain", 0.0, 3.0, true}, {"bias", -100.0, 100.0}}},
  };
  return defs;
}

const KindDef& kind_def(AugmentKind kind) {
  for (const auto& def : kind_defs()) {
    if (def.kind == kind) return def;
  }
  throw std::logic_error("unknown AugmentKind");
}

GrayImage convolve_1d(const GrayImage& img, const std::vector<double>& kernel, bool horizontal) {
  // Replicated border; intermediate values stay real until the caller
  // rounds, so this returns doubles packed by the caller.
  GrayImage out(img.width(), img.height());
  const int radius = int(kernel.size() / 2);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int rr = horizontal ? r : std::clamp(r + k, 0, img.height() - 1);
        const int cc = horizontal ? std::clamp(c + k, 0, img.width() - 1) : c;
        acc += kernel[size_t(k + radius)] * img(rr, cc);
      }
      out(r, c) = round_to_u8(acc);
    }
  }
  return out;
}

}  // namespace

std::string to_string(AugmentKind kind) { return kind_def(kind).name; }

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, int(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(size_t(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-(double(k) * k) / (2.0 * sigma * sigma));
    kernel[size_t(k + radius)] = w;
    sum += w;
  }
  for (auto& w : kernel) w /= sum;
  return convolve_1d(convolve_1d(img, kernel, true), kernel, false);
}

GrayImage motion_blur(const GrayImage& img, double length, double angle_deg) {
  const int n = std::max(1, int(std::llround(length)));
  if (n == 1) return img;
  const double rad = angle_deg * kPi / 180.0;
  const double dx = std::cos(rad);
  const double dy = std::sin(rad);
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        const double t = double(k) - double(n - 1) / 2.0;
        acc += sample_bilinear(img, c + t * dx, r + t * dy);
      }
      out(r, c) = round_to_u8(acc / n);
    }
  }
  return out;
}

GrayImage gaussian_noise(const GrayImage& img, double stddev, Rng& rng) {
  if (stddev <= 0.0) return img;
  GrayImage out(img.width(), img.height());
  for (size_t i = 0; i < img.data().size(); ++i) {
    out.data()[i] = round_to_u8(double(img.data()[i]) + rng.normal(0.0, stddev));
  }
  return out;
}

GrayImage salt_pepper(const GrayImage& img, double fraction, Rng& rng) {
  GrayImage out = img;
  if (fraction <= 0.0) return out;
  for (auto& v : out.data()) {
    if (rng.bernoulli(fraction)) v = rng.bernoulli(0.5) ? 255 : 0;
  }
  return out;
}

GrayImage shadow_gradient(const GrayImage& img, int direction, double min_gain) {
  if (direction < 0 || direction > 3) {
    throw std::invalid_argument("shadow_gradient: direction must be 0..3");
  }
  GrayImage out(img.width(), img.height());
  const int w = img.width(), h = img.height();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double t = 0.0;
      switch (direction) {
        case 0: t = w > 1 ? double(c) / (w - 1) : 0.0; break;           // darkens rightward
        case 1: t = w > 1 ? 1.0 - double(c) / (w - 1) : 0.0; break;     // darkens leftward
        case 2: t = h > 1 ? double(r) / (h - 1) : 0.0; break;           // darkens downward
        case 3: t = h > 1 ? 1.0 - double(r) / (h - 1) : 0.0; break;     // darkens upward
      }
      const double gain = 1.0 - (1.0 - min_gain) * t;
      out(r, c) = round_to_u8(img(r, c) * gain);
    }
  }
  return out;
}

GrayImage rotate(const GrayImage& img, double degrees) {
  const double rad = degrees * kPi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  const double cx = (img.width() - 1) / 2.0;
  const double cy = (img.height() - 1) / 2.0;
  const uint8_t fill = estimate_background(img);
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      // Inverse map: rotate the output pixel back into the source.
      const double x = c - cx, y = r - cy;
      const double sx = cx + x * cs + y * sn;
      const double sy = cy - x * sn + y * cs;
      out(r, c) = round_to_u8(sample_bilinear_fill(img, sx, sy, fill));
    }
  }
  return out;
}

GrayImage perspective(const GrayImage& img, const std::array<double, 8>& corner_displacements) {
  const double w = img.width() - 1.0, h = img.height() - 1.0;
  // Destination corners TL, TR, BR, BL map back to the source corners.
  const double dst[4][2] = {
      {0.0 + corner_displacements[0], 0.0 + corner_displacements[1]},
      {w + corner_displacements[2], 0.0 + corner_displacements[3]},
      {w + corner_displacements[4], h + corner_displacements[5]},
      {0.0 + corner_displacements[6], h + corner_displacements[7]},
  };
  const double src[4][2] = {{0.0, 0.0}, {w, 0.0}, {w, h}, {0.0, h}};

  // Solve the 8x8 system for the homography taking dst -> src.
  double a[8][9] = {};
  for (int i = 0; i < 4; ++i) {
    const double X = dst[i][0], Y = dst[i][1];
    const double u = src[i][0], v = src[i][1];
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = X; r0[1] = Y; r0[2] = 1; r0[6] = -u * X; r0[7] = -u * Y; r0[8] = u;
    r1[3] = X; r1[4] = Y; r1[5] = 1; r1[6] = -v * X; r1[7] = -v * Y; r1[8] = v;
  }
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 8; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw std::invalid_argument("perspective: degenerate corner displacement");
    }
    std::swap_ranges(a[col], a[col] + 9, a[pivot]);
    for (int row = 0; row < 8; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      for (int k = col; k < 9; ++k) a[row][k] -= f * a[col][k];
    }
  }
  double hm[9];
  for (int i = 0; i < 8; ++i) hm[i] = a[i][8] / a[i][i];
  hm[8] = 1.0;

  const uint8_t fill = estimate_background(img);
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double denom = hm[6] * c + hm[7] * r + hm[8];
      const double sx = (hm[0] * c + hm[1] * r + hm[2]) / denom;
      const double sy = (hm[3] * c + hm[4] * r + hm[5]) / denom;
      out(r, c) = round_to_u8(sample_bilinear_fill(img, sx, sy, fill));
    }
  }
  return out;
}

GrayImage sheet_bend(const GrayImage& img, double amplitude, double wavelength) {
  if (wavelength <= 0.0) throw std::invalid_argument("sheet_bend: wavelength must be > 0");
  if (amplitude == 0.0) return img;
  const uint8_t fill = estimate_background(img);
  GrayImage out(img.width(), img.height());
  for (int c = 0; c < img.width(); ++c) {
    const double dy = amplitude * std::sin(2.0 * kPi * double(c) / wavelength);
    for (int r = 0; r < img.height(); ++r) {
      out(r, c) = round_to_u8(sample_bilinear_fill(img, double(c), r + dy, fill));
    }
  }
  return out;
}

namespace {

GrayImage morph_3x3(const GrayImage& img, bool take_min) {
  // Restricted window at the borders: only in-image neighbors participate.
  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      uint8_t best = img(r, c);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr, cc = c + dc;
          if (rr < 0 || rr >= img.height() || cc < 0 || cc >= img.width()) continue;
          const uint8_t v = img(rr, cc);
          best = take_min ? std::min(best, v) : std::max(best, v);
        }
      }
      out(r, c) = best;
    }
  }
  return out;
}

}  // namespace

GrayImage erode(const GrayImage& img) { return morph_3x3(img, true); }

GrayImage dilate(const GrayImage& img) { return morph_3x3(img, false); }

GrayImage resolution_drop(const GrayImage& img, double factor) {
  if (factor <= 0.0 || factor > 1.0) {
    throw std::invalid_argument("resolution_drop: factor must be in (0, 1]");
  }
  if (factor == 1.0) return img;
  const int dw = std::max(int(std::llround(img.width() * factor)), 1);
  const int dh = std::max(int(std::llround(img.height() * factor)), 1);
  return resize_bilinear(resize_bilinear(img, dw, dh), img.width(), img.height());
}

GrayImage crop_jitter(const GrayImage& img, double max_fraction, Rng& rng) {
  if (max_fraction < 0.0 || max_fraction > 0.1) {
    throw std::invalid_argument("crop_jitter: max_fraction must be in [0, 0.1]");
  }
  const int max_v = int(img.height() * max_fraction);
  const int max_h = int(img.width() * max_fraction);
  const int top = max_v > 0 ? rng.uniform_int(0, max_v) : 0;
  const int bottom = max_v > 0 ? rng.uniform_int(0, max_v) : 0;
  const int left = max_h > 0 ? rng.uniform_int(0, max_h) : 0;
  const int right = max_h > 0 ? rng.uniform_int(0, max_h) : 0;
  const int new_h = img.height() - top - bottom;
  const int new_w = img.width() - left - right;
  if (new_h < 1 || new_w < 1) return img;
  return crop_rect(img, top, left, new_h, new_w);
}

GrayImage brightness_contrast(const GrayImage& img, double gain, double bias) {
  // Contrast pivots at mid-gray so gain alone does not wash the image out.
  GrayImage out(img.width(), img.height());
  for (size_t i = 0; i < img.data().size(); ++i) {
    out.data()[i] = round_to_u8(gain * (double(img.data()[i]) - 128.0) + 128.0 + bias);
  }
  return out;
}

AugmentationPolicy parse_policy_text(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("policy: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("specs") || !j.at("specs").is_array()) {
    throw DataError("policy: expected an object with a 'specs' array");
  }
  AugmentationPolicy policy;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw DataError("policy: 'seed' must be an integer");
    }
    policy.seed = j.at("seed").get<uint64_t>();
  }

  size_t index = 0;
  for (const auto& js : j.at("specs")) {
    const std::string where = "policy spec #" + std::to_string(index);
    if (!js.is_object() || !js.contains("kind") || !js.at("kind").is_string()) {
      throw DataError(where + ": expected an object with a string 'kind'");
    }
    const std::string kind_name = js.at("kind").get<std::string>();
    const KindDef* def = nullptr;
    for (const auto& kd : kind_defs()) {
      if (kind_name == kd.name) {
        def = &kd;
        break;
      }
    }
    if (!def) throw DataError(where + ": unknown kind '" + kind_name + "'");

    AugmentationSpec spec;
    spec.kind = def->kind;
    if (!js.contains("probability") || !js.at("probability").is_number()) {
      throw DataError(where + " (" + kind_name + "): missing numeric 'probability'");
    }
    spec.probability = js.at("probability").get<double>();
    if (spec.probability < 0.0 || spec.probability > 1.0) {
      throw DataError(where + " (" + kind_name + "): probability must be in [0, 1]");
    }

    nlohmann::json params = js.contains("params") ? js.at("params") : nlohmann::json::object();
    if (!params.is_object()) {
      throw DataError(where + " (" + kind_name + "): 'params' must be an object");
    }
    for (const auto& [key, value] : params.items()) {
      const ParamDef* pd = nullptr;
      for (const auto& p : def->params) {
        if (key == p.name) {
          pd = &p;
          break;
        }
      }
      if (!pd) {
        throw DataError(where + " (" + kind_name + "): unknown parameter '" + key + "'");
      }
      ParamRange range;
      if (value.is_number()) {
        range.lo = range.hi = value.get<double>();
      } else if (value.is_array() && value.size() == 2 && value[0].is_number() &&
                 value[1].is_number()) {
        range.lo = value[0].get<double>();
        range.hi = value[1].get<double>();
      } else {
        throw DataError(where + " (" + kind_name + "): parameter '" + key +
                        "' must be a number or [min, max]");
      }
      if (range.lo > range.hi) {
        throw DataError(where + " (" + kind_name + "): parameter '" + key +
                        "' range is empty (min > max)");
      }
      const bool lo_ok = pd->min_exclusive ? range.lo > pd->min : range.lo >= pd->min;
      if (!lo_ok || range.hi > pd->max) {
        throw DataError(where + " (" + kind_name + "): parameter '" + key + "' must lie in " +
                        (pd->min_exclusive ? "(" : "[") + std::to_string(pd->min) + ", " +
                        std::to_string(pd->max) + "]");
      }
      spec.params[key] = range;
    }
    for (const auto& p : def->params) {
      if (!spec.params.count(p.name)) {
        throw DataError(where + " (" + kind_name + "): missing parameter '" +
                        std::string(p.name) + "'");
      }
    }
    policy.specs.push_back(std::move(spec));
    ++index;
  }
  return policy;
}

AugmentationPolicy parse_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open policy " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_policy_text(text);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

GrayImage apply_policy(const GrayImage& img, const AugmentationPolicy& policy,
                       uint64_t item_index) {
  GrayImage out = img;
  for (size_t k = 0; k < policy.specs.size(); ++k) {
    const AugmentationSpec& spec = policy.specs[k];
    Rng rng(mix_seed(policy.seed, item_index, uint64_t(k)));
    if (!rng.bernoulli(spec.probability)) continue;
    auto draw = [&](const char* name) {
      const ParamRange& r = spec.params.at(name);
      return r.lo == r.hi ? r.lo : rng.uniform_real(r.lo, r.hi);
    };
    switch (spec.kind) {
      case AugmentKind::gaussian_blur:
        out = gaussian_blur(out, draw("sigma"));
        break;
      case AugmentKind::motion_blur: {
        const double length = draw("length");
        const double angle = draw("angle");
        out = motion_blur(out, length, angle);
        break;
      }
      case AugmentKind::gaussian_noise:
        out = gaussian_noise(out, draw("stddev"), rng);
        break;
      case AugmentKind::salt_pepper:
        out = salt_pepper(out, draw("fraction"), rng);
        break;
      case AugmentKind::shadow_gradient: {
        const ParamRange& dir = spec.params.at("direction");
        const int direction = rng.uniform_int(int(dir.lo), int(dir.hi));
        out = shadow_gradient(out, direction, draw("min_gain"));
        break;
      }
      case AugmentKind::rotate:
        out = rotate(out, draw("degrees"));
        break;
      case AugmentKind::perspective: {
        const double frac = draw("max_shift_frac");
        const double mx = frac * std::min(out.width(), out.height());
        std::array<double, 8> disp;
        for (auto& d : disp) d = rng.uniform_real(-mx, mx);
        out = perspective(out, disp);
        break;
      }
      case AugmentKind::sheet_bend: {
        const double amplitude = draw("amplitude");
        const double wavelength = draw("wavelength");
        out = sheet_bend(out, amplitude, wavelength);
        break;
      }
      case AugmentKind::erode:
        out = erode(out);
        break;
      case AugmentKind::dilate:
        out = dilate(out);
        break;
      case AugmentKind::resolution_drop:
        out = resolution_drop(out, draw("factor"));
        break;
      case AugmentKind::crop_jitter:
        out = crop_jitter(out, draw("max_fraction"), rng);
        break;
      case AugmentKind::brightness_contrast: {
        const double gain = draw("gain");
        const double bias = draw("bias");
        out = brightness_contrast(out, gain, bias);
        break;
      }
    }
  }
  return out;
}

}  // namespace wordprep
