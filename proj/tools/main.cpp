// wordprep: word-box dataset tooling for OCR pipelines.
//
// Subcommands: generate, normalize, augment, subset, score, inspect.
// Exit codes: 0 success, 1 usage error, 2 data error (bad manifest, image
// or asset), 3 partial failure (some items skipped, reports written).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wordprep/augment.hpp"
#include "wordprep/errors.hpp"
#include "wordprep/image.hpp"
#include "wordprep/kmeans1d.hpp"
#include "wordprep/manifest.hpp"
#include "wordprep/metrics.hpp"
#include "wordprep/parallel.hpp"
#include "wordprep/png_io.hpp"
#include "wordprep/profile_norm.hpp"
#include "wordprep/synthgen.hpp"

namespace fs = std::filesystem;
using namespace wordprep;

namespace {

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kPartialFailure = 3;

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 usage error, 2 data error, 3 partial failure";

int run_generate(const fs::path& config_path, size_t count, const fs::path& out_dir,
                 std::optional<uint64_t> seed, int jobs) {
  try {
    GeneratorConfig config = parse_generator_config(config_path);
    if (seed) config.seed = *seed;
    const Manifest manifest = generate_dataset(config, count, out_dir, jobs);
    std::cerr << "generated " << manifest.entries.size() << " boxes -> " << out_dir.string()
              << "\n";
    return kOk;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

int run_normalize(const fs::path& manifest_path, const fs::path& out_dir,
                  const NormalizationParams& params, int jobs) {
  try {
    const Manifest manifest = read_manifest(manifest_path);
    const NormalizeDatasetResult result =
        normalize_dataset(manifest, manifest_path.parent_path(), params, out_dir, jobs);
    std::cerr << "normalized " << result.normalized << " boxes, " << result.fallbacks
              << " no-text fallbacks, " << result.failures << " failures -> "
              << out_dir.string() << "\n";
    return result.failures > 0 ? kPartialFailure : kOk;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

int run_augment(const fs::path& manifest_path, const fs::path& policy_path,
                const fs::path& out_dir, std::optional<uint64_t> seed, int jobs) {
  try {
    const Manifest manifest = read_manifest(manifest_path);
    AugmentationPolicy policy = parse_policy(policy_path);
    if (seed) policy.seed = *seed;
    const fs::path manifest_dir = manifest_path.parent_path();

    for (const auto& entry : manifest.entries) {
      if (!fs::exists(manifest_dir / entry.path)) {
        throw DataError("augment: missing image " + (manifest_dir / entry.path).string());
      }
    }
    fs::create_directories(out_dir);

    std::vector<std::string> errors(manifest.entries.size());
    parallel_for(manifest.entries.size(), jobs, [&](size_t i) {
      const auto& entry = manifest.entries[i];
      try {
        const GrayImage img = read_gray_png(manifest_dir / entry.path);
        const GrayImage augmented = apply_policy(img, policy, uint64_t(i));
        const fs::path out_path = out_dir / entry.path;
        if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
        write_gray_png(augmented, out_path);
      } catch (const ImageIoError& e) {
        errors[i] = e.what();
      }
    });

    Manifest out_manifest;
    size_t failures = 0;
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
      if (errors[i].empty()) {
        out_manifest.entries.push_back(manifest.entries[i]);
      } else {
        ++failures;
        std::cerr << "skipped: " << errors[i] << "\n";
      }
    }
    write_manifest(out_manifest, out_dir / "manifest.jsonl");
    std::cerr << "augmented " << out_manifest.entries.size() << " boxes, " << failures
              << " failures -> " << out_dir.string() << "\n";
    return failures > 0 ? kPartialFailure : kOk;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

int run_subset(const fs::path& manifest_path, size_t size, uint64_t seed,
               const fs::path& out_path) {
  try {
    const Manifest manifest = read_manifest(manifest_path);
    const Manifest subset = sample_subset(manifest, size, seed);
    write_manifest(subset, out_path);
    std::cerr << "sampled " << size << " train entries -> " << out_path.string() << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

int run_score(const fs::path& manifest_path, const fs::path& predictions_path,
              const std::string& split_name, bool case_fold, const fs::path& csv_out,
              std::optional<size_t> train_size, const std::string& variant) {
  try {
    const Manifest manifest = read_manifest(manifest_path);
    const PredictionSet preds = read_predictions(predictions_path);
    const Split split = split_from_string(split_name);
    const ScoreReport report = score(preds, manifest, split, case_fold);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", report.word_accuracy);
    std::cout << "word_accuracy " << buf << "\n";
    if (report.char_error_rate) {
      std::snprintf(buf, sizeof(buf), "%.6f", *report.char_error_rate);
      std::cout << "char_error_rate " << buf << "\n";
    } else {
      std::cout << "char_error_rate n/a\n";
    }
    std::cout << "n_scored " << report.n_scored << "\n";
    std::cout << "n_missing " << report.n_missing << "\n";

    if (!csv_out.empty()) {
      if (!train_size) {
        std::cerr << "error: --csv-out requires --train-size\n";
        return kUsageError;
      }
      std::vector<CurveRow> rows;
      if (fs::exists(csv_out)) {
        std::ifstream in(csv_out, std::ios::binary);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        rows = parse_curve(text);
      }
      rows.push_back(CurveRow{*train_size, variant, report});
      std::ofstream out(csv_out, std::ios::binary | std::ios::trunc);
      out << emit_curve(std::move(rows));
    }
    return kOk;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

int run_inspect(const fs::path& image_path, double min_contrast) {
  try {
    const GrayImage img = read_gray_png(image_path);
    const RowProfile profile = row_profile(img);

    std::vector<int> labels(profile.size(), -1);
    std::optional<WordBand> band;
    try {
      const TwoMeansResult clusters = two_means_1d(profile);
      labels = clusters.labels;
      band = detect_word_band(img, min_contrast);
    } catch (const NoTextFound& e) {
      std::cerr << "no text found: " << e.what() << "\n";
    } catch (const DegenerateInput& e) {
      std::cerr << "no text found: " << e.what() << "\n";
    } catch (const EmptyInput& e) {
      std::cerr << "no text found: " << e.what() << "\n";
    }

    std::cout << "row,mean,cluster,in_band\n";
    char buf[64];
    for (size_t r = 0; r < profile.size(); ++r) {
      std::snprintf(buf, sizeof(buf), "%.6f", profile[r]);
      const int in_band =
          band && int(r) >= band->top_row && int(r) <= band->bottom_row ? 1 : 0;
      std::cout << r << "," << buf << "," << labels[r] << "," << in_band << "\n";
    }
    if (band) {
      std::cerr << "band: rows " << band->top_row << ".." << band->bottom_row
                << " (profile height " << band->profile_height() << ")\n";
    }
    return kOk;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wordprep: word-box dataset tooling for OCR pipelines"};
  app.require_subcommand(1);
  app.footer(kExitCodeHelp);

  // generate
  auto* generate = app.add_subcommand("generate", "Generate synthetic word boxes");
  generate->footer(kExitCodeHelp);
  fs::path gen_config, gen_out;
  size_t gen_count = 0;
  std::optional<uint64_t> gen_seed;
  int gen_jobs = 1;
  generate->add_option("--config", gen_config, "Generator config JSON")->required();
  generate->add_option("--count", gen_count, "Number of boxes to generate")->required();
  generate->add_option("--out", gen_out, "Output directory")->required();
  generate->add_option("--seed", gen_seed, "Override the config's seed");
  generate->add_option("--jobs", gen_jobs, "Worker threads (output is identical for any value)")
      ->default_val(1);

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Profile-normalize every box in a dataset");
  normalize->footer(kExitCodeHelp);
  fs::path norm_manifest, norm_out;
  NormalizationParams norm_params;
  std::string norm_no_text = "resize";
  int norm_jobs = 1;
  normalize->add_option("--manifest", norm_manifest, "Input manifest (JSON lines)")->required();
  normalize->add_option("--out", norm_out, "Output directory")->required();
  normalize->add_option("--profile-height", norm_params.target_profile_height,
                        "Target word profile height in px")
      ->default_val(20);
  normalize->add_option("--box-height", norm_params.target_box_height,
                        "Target box height in px")
      ->default_val(32);
  normalize->add_option("--min-contrast", norm_params.min_contrast,
                        "Minimum row-cluster contrast to accept a band")
      ->default_val(8.0);
  normalize
      ->add_option("--no-text", norm_no_text,
                   "Blank-box handling: 'resize' passes boxes through resized to the box "
                   "height, 'reject' fails them")
      ->check(CLI::IsMember({"resize", "reject"}))
      ->default_val("resize");
  normalize->add_option("--jobs", norm_jobs, "Worker threads (output is identical for any value)")
      ->default_val(1);

  // augment
  auto* augment = app.add_subcommand("augment", "Apply an augmentation policy to a dataset");
  augment->footer(kExitCodeHelp);
  fs::path aug_manifest, aug_policy, aug_out;
  std::optional<uint64_t> aug_seed;
  int aug_jobs = 1;
  augment->add_option("--manifest", aug_manifest, "Input manifest (JSON lines)")->required();
  augment->add_option("--policy", aug_policy, "Augmentation policy JSON")->required();
  augment->add_option("--out", aug_out, "Output directory")->required();
  augment->add_option("--seed", aug_seed, "Override the policy's seed");
  augment->add_option("--jobs", aug_jobs, "Worker threads (output is identical for any value)")
      ->default_val(1);

  // subset
  auto* subset = app.add_subcommand("subset", "Sample a size-controlled training subset");
  subset->footer(kExitCodeHelp);
  fs::path sub_manifest, sub_out;
  size_t sub_size = 0;
  uint64_t sub_seed = 0;
  subset->add_option("--manifest", sub_manifest, "Input manifest (JSON lines)")->required();
  subset->add_option("--size", sub_size, "Number of train entries to keep")->required();
  subset->add_option("--seed", sub_seed, "Sampling seed")->required();
  subset
      ->add_option("--out", sub_out,
                   "Output manifest path (keep it next to the input manifest; entry paths "
                   "are copied verbatim)")
      ->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "Score recognizer predictions");
  score_cmd->footer(kExitCodeHelp);
  fs::path score_manifest, score_preds, score_csv;
  std::string score_split = "test";
  bool score_case_fold = false;
  std::optional<size_t> score_train_size;
  std::string score_variant = "default";
  score_cmd->add_option("--manifest", score_manifest, "Ground-truth manifest")->required();
  score_cmd->add_option("--predictions", score_preds, "Predictions (JSON lines)")->required();
  score_cmd->add_option("--split", score_split, "Split to score")
      ->check(CLI::IsMember({"train", "val", "test"}))
      ->default_val("test");
  score_cmd->add_flag("--case-fold", score_case_fold, "Lowercase both sides before comparing");
  score_cmd->add_option("--csv-out", score_csv,
                        "Accumulate a (train_size, variant) row into this curve CSV");
  score_cmd->add_option("--train-size", score_train_size,
                        "Training-set size label for the curve row");
  score_cmd->add_option("--variant", score_variant, "Variant label for the curve row")
      ->default_val("default");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Dump a box's row profile and detected band");
  inspect->footer(kExitCodeHelp);
  fs::path ins_image;
  double ins_min_contrast = 8.0;
  inspect->add_option("--image", ins_image, "PNG image to inspect")->required();
  inspect->add_option("--min-contrast", ins_min_contrast,
                      "Minimum row-cluster contrast to accept a band")
      ->default_val(8.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 returns 0 for --help/--version; anything else is a usage error.
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (generate->parsed()) {
      return run_generate(gen_config, gen_count, gen_out, gen_seed, gen_jobs);
    }
    if (normalize->parsed()) {
      norm_params.no_text =
          norm_no_text == "reject" ? NoTextPolicy::reject : NoTextPolicy::plain_resize;
      if (norm_params.target_profile_height < 1 ||
          norm_params.target_profile_height > norm_params.target_box_height) {
        std::cerr << "error: need 1 <= --profile-height <= --box-height\n";
        return kUsageError;
      }
      return run_normalize(norm_manifest, norm_out, norm_params, norm_jobs);
    }
    if (augment->parsed()) {
      return run_augment(aug_manifest, aug_policy, aug_out, aug_seed, aug_jobs);
    }
    if (subset->parsed()) {
      return run_subset(sub_manifest, sub_size, sub_seed, sub_out);
    }
    if (score_cmd->parsed()) {
      return run_score(score_manifest, score_preds, score_split, score_case_fold, score_csv,
                       score_train_size, score_variant);
    }
    if (inspect->parsed()) {
      return run_inspect(ins_image, ins_min_contrast);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
