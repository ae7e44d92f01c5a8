#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wordprep/manifest.hpp"

namespace wordprep {

/// Predictions keyed by image path.
using PredictionSet = std::map<std::string, std::string>;

/// Reads JSON-lines predictions ({"path":...,"text":...} per line).
PredictionSet read_predictions(const std::filesystem::path& path);

struct ScoreReport {
  double word_accuracy = 0.0;
  // Empty when the split has zero total label length (no data to rate).
  std::optional<double> char_error_rate;
  size_t n_scored = 0;   // entries with a prediction
  size_t n_missing = 0;  // entries without one (scored as wrong)
};

/// Unit-cost edit distance over Unicode scalar values.
size_t levenshtein(std::string_view a, std::string_view b);

/// Scores predictions against the manifest entries of one split. Both
/// sides are trimmed of ASCII whitespace and, when case_fold is set,
/// lowercased (simple Unicode mapping) before comparison. Missing
/// predictions score zero and count as full deletion of the label.
ScoreReport score(const PredictionSet& preds, const Manifest& truth, Split split,
                  bool case_fold);

/// score() restricted to the named metric.
ScoreReport word_accuracy(const PredictionSet& preds, const Manifest& truth, Split split,
                          bool case_fold);
std::optional<double> char_error_rate(const PredictionSet& preds, const Manifest& truth,
                                      Split split, bool case_fold);

struct CurveRow {
  size_t train_size = 0;
  std::string variant;
  ScoreReport report;
};

/// Accuracy-versus-training-size table as CSV, sorted by
/// (variant, train_size), fixed 6-decimal formatting, LF line endings.
std::string emit_curve(std::vector<CurveRow> rows);

/// Parses CSV produced by emit_curve (used to accumulate rows across
/// invocations). Throws DataError on malformed input.
std::vector<CurveRow> parse_curve(const std::string& csv);

}  // namespace wordprep
