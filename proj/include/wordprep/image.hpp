#pragma once

#include <cstdint>
#include <vector>

namespace wordprep {

/// 8-bit single-channel raster, row-major, the currency of the whole
/// pipeline. Construction validates width/height >= 1 and the data size.
/// All operations below are pure functions returning new images, so shared
/// instances are safe to read from any number of threads.
class GrayImage {
 public:
  GrayImage(int width, int height, uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }

  uint8_t operator()(int row, int col) const {
    return data_[size_t(row) * size_t(width_) + size_t(col)];
  }
  uint8_t& operator()(int row, int col) {
    return data_[size_t(row) * size_t(width_) + size_t(col)];
  }

  const std::vector<uint8_t>& data() const { return data_; }
  std::vector<uint8_t>& data() { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_;
  int height_;
  std::vector<uint8_t> data_;
};

/// Per-row mean intensity, one entry per image row.
using RowProfile = std::vector<double>;

/// Mean intensity of each row, exact: integer accumulation, one division.
RowProfile row_profile(const GrayImage& img);

/// Bilinear resize with the half-pixel-center convention; results rounded
/// to nearest, ties away from zero. Same-size resize is bit-identical.
GrayImage resize_bilinear(const GrayImage& img, int new_width, int new_height);

/// Adds `top` rows above and `bottom` rows below, filled with `fill`.
GrayImage pad_vertical(const GrayImage& img, int top, int bottom, uint8_t fill);

/// Keeps rows row0..row1 inclusive. Out-of-range rows are rejected.
GrayImage crop_vertical(const GrayImage& img, int row0, int row1);

/// General rectangular crop (used by augmentation and patch extraction).
GrayImage crop_rect(const GrayImage& img, int row0, int col0, int height, int width);

/// Median of the border pixels (first/last row, first/last column, corners
/// once); even-sized multisets take the lower middle value.
uint8_t estimate_background(const GrayImage& img);

/// Bilinear tap at continuous pixel-center coordinates, clamped to the
/// image rectangle.
double sample_bilinear(const GrayImage& img, double x, double y);

/// Same, but taps outside the image read `fill` instead of clamping.
double sample_bilinear_fill(const GrayImage& img, double x, double y, uint8_t fill);

/// Nearest integer, ties away from zero, clamped to [0, 255].
uint8_t round_to_u8(double v);

}  // namespace wordprep
