#pragma once

#include <stdexcept>
#include <string>

namespace wordprep {

/// Clustering input has fewer than two samples.
struct EmptyInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Clustering input has zero spread; no two clusters exist.
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Band detection found no text rows (blank or near-blank box).
struct NoTextFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The font has no glyph for some character of the word.
struct UnrenderableWord : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File-level problem: missing or malformed image, manifest, font, config.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ImageIoError : DataError {
  using DataError::DataError;
};

struct FontError : DataError {
  using DataError::DataError;
};

struct ManifestError : DataError {
  using DataError::DataError;
};

}  // namespace wordprep
