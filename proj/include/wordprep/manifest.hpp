#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wordprep {

enum class Split { train, val, test };

std::string to_string(Split s);
Split split_from_string(const std::string& s);  // throws ManifestError

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory
  std::string text;  // ground-truth label, UTF-8
  Split split = Split::train;

  bool operator==(const ManifestEntry&) const = default;
};

/// Ordered dataset catalog. Paths are unique within a manifest.
struct Manifest {
  std::vector<ManifestEntry> entries;

  bool operator==(const Manifest&) const = default;
};

/// Reads a JSON-lines manifest ({"path":...,"text":...,"split":...} per
/// line). Malformed lines are reported with their line number; duplicate
/// paths are rejected. Throws ManifestError.
Manifest read_manifest(const std::filesystem::path& path);

/// Writes the manifest; read(write(m)) == m, byte-stable on rewrite.
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Serializes one entry to its JSON line (no trailing newline).
std::string manifest_line(const ManifestEntry& entry);

/// Uniform sample of `size` train entries without replacement,
/// deterministic in `seed`, preserving the original relative order.
/// val/test entries pass through untouched. Samples are nested: with the
/// same seed, a smaller sample is a subset of every larger one. Throws
/// std::invalid_argument when size exceeds the train-split count.
Manifest sample_subset(const Manifest& manifest, size_t size, uint64_t seed);

/// Adapter for datasets shipped as a directory of images plus a labels
/// file (lines of "<filename><TAB><label>"). Produces manifest entries in
/// labels-file order with the given split tag.
Manifest manifest_from_labels_file(const std::filesystem::path& images_dir,
                                   const std::filesystem::path& labels_file, Split split);

}  // namespace wordprep
