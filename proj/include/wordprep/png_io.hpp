#pragma once

#include <filesystem>

#include "wordprep/image.hpp"

namespace wordprep {

/// Reads any PNG as 8-bit grayscale. Color inputs are converted to luma
/// with the BT.601 weights (0.299 R + 0.587 G + 0.114 B), rounded to
/// nearest; alpha is composited over white first. Throws ImageIoError.
GrayImage read_gray_png(const std::filesystem::path& path);

/// Writes an 8-bit grayscale PNG. Throws ImageIoError.
void write_gray_png(const GrayImage& img, const std::filesystem::path& path);

}  // namespace wordprep
