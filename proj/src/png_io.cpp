#include "wordprep/png_io.hpp"

#include <png.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "wordprep/errors.hpp"

namespace wordprep {

GrayImage read_gray_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;

  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError("cannot read PNG " + path.string() + ": " + msg);
  }

  // Always decode to RGBA so the luma and alpha handling stays in our hands.
  image.format = PNG_FORMAT_RGBA;
  std::vector<uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int w = int(image.width);
  const int h = int(image.height);
  png_image_free(&image);
  if (w < 1 || h < 1) throw ImageIoError("empty PNG " + path.string());

  GrayImage out(w, h);
  const uint8_t* p = rgba.data();
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c, p += 4) {
      const double a = p[3] / 255.0;
      const double red = p[0] * a + 255.0 * (1.0 - a);
      const double green = p[1] * a + 255.0 * (1.0 - a);
      const double blue = p[2] * a + 255.0 * (1.0 - a);
      out(r, c) = round_to_u8(0.299 * red + 0.587 * green + 0.114 * blue);
    }
  }
  return out;
}

void write_gray_png(const GrayImage& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = png_uint_32(img.width());
  image.height = png_uint_32(img.height());
  image.format = PNG_FORMAT_GRAY;

  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.data().data(), 0,
                               nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError("cannot write PNG " + path.string() + ": " + msg);
  }
}

}  // namespace wordprep
