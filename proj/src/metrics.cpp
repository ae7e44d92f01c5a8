#include "wordprep/metrics.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wordprep/errors.hpp"
#include "wordprep/utf8.hpp"

namespace wordprep {

namespace {

std::string trim_ascii(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return std::string();
  const size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::u32string normalize_text(std::string_view s, bool case_fold) {
  std::u32string u = decode_utf8(trim_ascii(s));
  if (case_fold) {
    for (auto& c : u) c = simple_lower(c);
  }
  return u;
}

size_t edit_distance(const std::u32string& a, const std::u32string& b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<size_t> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

PredictionSet read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions " + path.string());
  PredictionSet preds;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": malformed JSON line: " + e.what());
    }
    if (!j.is_object() || !j.contains("path") || !j.contains("text") ||
        !j["path"].is_string() || !j["text"].is_string()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected object with string fields path, text");
    }
    const auto p = j["path"].get<std::string>();
    if (!preds.emplace(p, j["text"].get<std::string>()).second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate path '" + p +
                      "'");
    }
  }
  return preds;
}

size_t levenshtein(std::string_view a, std::string_view b) {
  return edit_distance(decode_utf8(a), decode_utf8(b));
}

ScoreReport score(const PredictionSet& preds, const Manifest& truth, Split split,
                  bool case_fold) {
  ScoreReport report;
  size_t matches = 0;
  size_t total = 0;
  size_t edits = 0;
  size_t label_len = 0;
  for (const auto& entry : truth.entries) {
    if (entry.split != split) continue;
    ++total;
    const std::u32string label = normalize_text(entry.text, case_fold);
    label_len += label.size();
    auto it = preds.find(entry.path);
    if (it == preds.end()) {
      ++report.n_missing;
      edits += label.size();  // full deletion
      continue;
    }
    ++report.n_scored;
    const std::u32string pred = normalize_text(it->second, case_fold);
    if (pred == label) ++matches;
    edits += edit_distance(pred, label);
  }
  report.word_accuracy = total > 0 ? double(matches) / double(total) : 0.0;
  if (label_len > 0) report.char_error_rate = double(edits) / double(label_len);
  return report;
}

ScoreReport word_accuracy(const PredictionSet& preds, const Manifest& truth, Split split,
                          bool case_fold) {
  return score(preds, truth, split, case_fold);
}

std::optional<double> char_error_rate(const PredictionSet& preds, const Manifest& truth,
                                      Split split, bool case_fold) {
  return score(preds, truth, split, case_fold).char_error_rate;
}

std::string emit_curve(std::vector<CurveRow> rows) {
  if (rows.empty()) throw std::invalid_argument("emit_curve: no rows");
  std::stable_sort(rows.begin(), rows.end(), [](const CurveRow& a, const CurveRow& b) {
    if (a.variant != b.variant) return a.variant < b.variant;
    return a.train_size < b.train_size;
  });
  std::string out = "train_size,variant,word_accuracy,char_error_rate,n_scored,n_missing\n";
  for (const auto& row : rows) {
    out += std::to_string(row.train_size);
    out += ',';
    out += row.variant;
    out += ',';
    out += format6(row.report.word_accuracy);
    out += ',';
    out += row.report.char_error_rate ? format6(*row.report.char_error_rate) : std::string("nan");
    out += ',';
    out += std::to_string(row.report.n_scored);
    out += ',';
    out += std::to_string(row.report.n_missing);
    out += '\n';
  }
  return out;
}

std::vector<CurveRow> parse_curve(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw DataError("parse_curve: empty input");
  std::vector<CurveRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string, 6> fields;
    size_t start = 0;
    for (int f = 0; f < 6; ++f) {
      const size_t comma = line.find(',', start);
      if (f < 5) {
        if (comma == std::string::npos) {
          throw DataError("parse_curve: line " + std::to_string(line_no) + ": expected 6 fields");
        }
        fields[size_t(f)] = line.substr(start, comma - start);
        start = comma + 1;
      } else {
        fields[size_t(f)] = line.substr(start);
      }
    }
    try {
      CurveRow row;
      row.train_size = std::stoull(fields[0]);
      row.variant = fields[1];
      row.report.word_accuracy = std::stod(fields[2]);
      if (fields[3] != "nan") row.report.char_error_rate = std::stod(fields[3]);
      row.report.n_scored = std::stoull(fields[4]);
      row.report.n_missing = std::stoull(fields[5]);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw DataError("parse_curve: line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace wordprep
