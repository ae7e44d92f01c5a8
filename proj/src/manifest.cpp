#include "wordprep/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wordprep/errors.hpp"
#include "wordprep/rng.hpp"

namespace wordprep {

namespace {
using ordered_json = nlohmann::ordered_json;
}

std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw ManifestError("unknown split tag '" + s + "' (expected train|val|test)");
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest " + path.string());

  Manifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError(path.string() + ":" + std::to_string(line_no) +
                          ": malformed JSON line: " + e.what());
    }
    if (!j.is_object() || !j.contains("path") || !j.contains("text") || !j.contains("split") ||
        !j["path"].is_string() || !j["text"].is_string() || !j["split"].is_string()) {
      throw ManifestError(path.string() + ":" + std::to_string(line_no) +
                          ": expected object with string fields path, text, split");
    }
    ManifestEntry entry;
    entry.path = j["path"].get<std::string>();
    entry.text = j["text"].get<std::string>();
    try {
      entry.split = split_from_string(j["split"].get<std::string>());
    } catch (const ManifestError& e) {
      throw ManifestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen.insert(entry.path).second) {
      throw ManifestError(path.string() + ":" + std::to_string(line_no) + ": duplicate path '" +
                          entry.path + "'");
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

std::string manifest_line(const ManifestEntry& entry) {
  ordered_json j;
  j["path"] = entry.path;
  j["text"] = entry.text;
  j["split"] = to_string(entry.split);
  return j.dump();
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::unordered_set<std::string> seen;
  for (const auto& entry : manifest.entries) {
    if (!seen.insert(entry.path).second) {
      throw ManifestError("write_manifest: duplicate path '" + entry.path + "'");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ManifestError("cannot write manifest " + path.string());
  for (const auto& entry : manifest.entries) {
    out << manifest_line(entry) << '\n';
  }
  if (!out) throw ManifestError("error writing manifest " + path.string());
}

Manifest sample_subset(const Manifest& manifest, size_t size, uint64_t seed) {
  std::vector<size_t> train_indices;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    if (manifest.entries[i].split == Split::train) train_indices.push_back(i);
  }
  if (size > train_indices.size()) {
    throw std::invalid_argument("sample_subset: requested " + std::to_string(size) +
                                " train entries but the manifest has only " +
                                std::to_string(train_indices.size()));
  }

  // Seeded permutation; taking rank < size makes samples nested across
  // sizes for a fixed seed (prefix sampling).
  std::vector<size_t> perm(train_indices.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  Rng rng(mix_seed(seed, 0x5ab5e7ULL));
  for (size_t i = perm.size(); i > 1; --i) {
    const size_t j = rng.uniform_u32(uint32_t(i));
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<char> keep(manifest.entries.size(), 0);
  for (size_t rank = 0; rank < size; ++rank) keep[train_indices[perm[rank]]] = 1;

  Manifest out;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& entry = manifest.entries[i];
    if (entry.split != Split::train || keep[i]) out.entries.push_back(entry);
  }
  return out;
}

Manifest manifest_from_labels_file(const std::filesystem::path& images_dir,
                                   const std::filesystem::path& labels_file, Split split) {
  std::ifstream in(labels_file, std::ios::binary);
  if (!in) throw ManifestError("cannot open labels file " + labels_file.string());
  Manifest manifest;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ManifestError(labels_file.string() + ":" + std::to_string(line_no) +
                          ": expected '<filename>\\t<label>'");
    }
    ManifestEntry entry;
    entry.path = line.substr(0, tab);
    entry.text = line.substr(tab + 1);
    entry.split = split;
    if (!std::filesystem::exists(images_dir / entry.path)) {
      throw ManifestError(labels_file.string() + ":" + std::to_string(line_no) + ": image '" +
                          entry.path + "' not found under " + images_dir.string());
    }
    if (!seen.insert(entry.path).second) {
      throw ManifestError(labels_file.string() + ":" + std::to_string(line_no) +
                          ": duplicate path '" + entry.path + "'");
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

}  // namespace wordprep
