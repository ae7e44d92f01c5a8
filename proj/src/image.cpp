#include "wordprep/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wordprep {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("GrayImage dimensions must be >= 1, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

GrayImage::GrayImage(int width, int height, uint8_t fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(size_t(width) * size_t(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != size_t(width) * size_t(height)) {
    throw std::invalid_argument("GrayImage data size " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height));
  }
}

RowProfile row_profile(const GrayImage& img) {
  RowProfile means(size_t(img.height()));
  for (int r = 0; r < img.height(); ++r) {
    uint64_t sum = 0;
    for (int c = 0; c < img.width(); ++c) sum += img(r, c);
    means[size_t(r)] = double(sum) / double(img.width());
  }
  return means;
}

uint8_t round_to_u8(double v) {
  const long long r = std::llround(v);
  return uint8_t(std::clamp<long long>(r, 0, 255));
}

double sample_bilinear(const GrayImage& img, double x, double y) {
  x = std::clamp(x, 0.0, double(img.width() - 1));
  y = std::clamp(y, 0.0, double(img.height() - 1));
  const int x0 = int(std::floor(x));
  const int y0 = int(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = img(y0, x0) * (1.0 - fx) + img(y0, x1) * fx;
  const double bot = img(y1, x0) * (1.0 - fx) + img(y1, x1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

double sample_bilinear_fill(const GrayImage& img, double x, double y, uint8_t fill) {
  auto tap = [&](int r, int c) -> double {
    if (r < 0 || r >= img.height() || c < 0 || c >= img.width()) return double(fill);
    return double(img(r, c));
  };
  const int x0 = int(std::floor(x));
  const int y0 = int(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const double top = tap(y0, x0) * (1.0 - fx) + tap(y0, x0 + 1) * fx;
  const double bot = tap(y0 + 1, x0) * (1.0 - fx) + tap(y0 + 1, x0 + 1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

GrayImage resize_bilinear(const GrayImage& img, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) {
    throw std::invalid_argument("resize_bilinear: target dimensions must be >= 1");
  }
  GrayImage out(new_width, new_height);
  for (int r = 0; r < new_height; ++r) {
    // Multiply before dividing: (r + 0.5) * h is exact in doubles, so the
    // mapping rounds once and is reproducible in any equivalent sampler.
    const double src_y = (r + 0.5) * img.height() / new_height - 0.5;
    for (int c = 0; c < new_width; ++c) {
      const double src_x = (c + 0.5) * img.width() / new_width - 0.5;
      out(r, c) = round_to_u8(sample_bilinear(img, src_x, src_y));
    }
  }
  return out;
}

GrayImage pad_vertical(const GrayImage& img, int top, int bottom, uint8_t fill) {
  if (top < 0 || bottom < 0) throw std::invalid_argument("pad_vertical: negative padding");
  if (top == 0 && bottom == 0) return img;
  GrayImage out(img.width(), img.height() + top + bottom, fill);
  std::copy(img.data().begin(), img.data().end(),
            out.data().begin() + size_t(top) * size_t(img.width()));
  return out;
}

GrayImage crop_vertical(const GrayImage& img, int row0, int row1) {
  if (row0 < 0 || row1 < row0 || row1 >= img.height()) {
    throw std::out_of_range("crop_vertical: rows " + std::to_string(row0) + ".." +
                            std::to_string(row1) + " out of range for height " +
                            std::to_string(img.height()));
  }
  const size_t w = size_t(img.width());
  std::vector<uint8_t> data(img.data().begin() + size_t(row0) * w,
                            img.data().begin() + size_t(row1 + 1) * w);
  return GrayImage(img.width(), row1 - row0 + 1, std::move(data));
}

GrayImage crop_rect(const GrayImage& img, int row0, int col0, int height, int width) {
  if (row0 < 0 || col0 < 0 || height < 1 || width < 1 || row0 + height > img.height() ||
      col0 + width > img.width()) {
    throw std::out_of_range("crop_rect: rectangle out of range");
  }
  GrayImage out(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) out(r, c) = img(row0 + r, col0 + c);
  }
  return out;
}

uint8_t estimate_background(const GrayImage& img) {
  std::vector<uint8_t> border;
  const int w = img.width(), h = img.height();
  border.reserve(size_t(2 * w + 2 * h));
  for (int c = 0; c < w; ++c) border.push_back(img(0, c));
  if (h > 1) {
    for (int c = 0; c < w; ++c) border.push_back(img(h - 1, c));
  }
  if (w > 1) {
    for (int r = 1; r < h - 1; ++r) {
      border.push_back(img(r, 0));
      border.push_back(img(r, w - 1));
    }
  } else {
    for (int r = 1; r < h - 1; ++r) border.push_back(img(r, 0));
  }
  // Lower middle value for even-sized multisets.
  const size_t mid = (border.size() - 1) / 2;
  std::nth_element(border.begin(), border.begin() + mid, border.end());
  return border[mid];
}

}  // namespace wordprep
