// Python bindings for the wordprep core. Images cross the boundary as
// 2-D uint8 numpy arrays (rows, cols); masks as 2-D float32.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wordprep/augment.hpp"
#include "wordprep/errors.hpp"
#include "wordprep/image.hpp"
#include "wordprep/kmeans1d.hpp"
#include "wordprep/manifest.hpp"
#include "wordprep/metrics.hpp"
#include "wordprep/png_io.hpp"
#include "wordprep/profile_norm.hpp"
#include "wordprep/synthgen.hpp"

namespace py = pybind11;
using namespace wordprep;

namespace {

GrayImage image_from_array(const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint8 array (rows, cols)");
  const int h = int(a.shape(0));
  const int w = int(a.shape(1));
  std::vector<uint8_t> data(a.data(), a.data() + size_t(h) * size_t(w));
  return GrayImage(w, h, std::move(data));
}

py::array_t<uint8_t> array_from_image(const GrayImage& img) {
  py::array_t<uint8_t> a({img.height(), img.width()});
  std::copy(img.data().begin(), img.data().end(), a.mutable_data());
  return a;
}

py::dict report_to_dict(const NormalizationReport& r) {
  py::dict d;
  d["no_text_fallback"] = r.no_text_fallback;
  if (!r.no_text_fallback) {
    d["band_top"] = r.detected_band.top_row;
    d["band_bottom"] = r.detected_band.bottom_row;
    d["profile_height"] = r.detected_band.profile_height();
  }
  d["scale_factor"] = r.scale_factor;
  d["pad_top"] = r.pad_top;
  d["pad_bottom"] = r.pad_bottom;
  d["crop_top"] = r.crop_top;
  d["crop_bottom"] = r.crop_bottom;
  d["fill_intensity"] = int(r.fill_intensity);
  return d;
}

}  // namespace

PYBIND11_MODULE(wordprep, m) {
  m.doc() = "Word-box preprocessing and synthetic data toolkit for OCR pipelines";

  py::register_exception<NoTextFound>(m, "NoTextFoundError");
  py::register_exception<DegenerateInput>(m, "DegenerateInputError");
  py::register_exception<UnrenderableWord>(m, "UnrenderableWordError");
  py::register_exception<DataError>(m, "DataError");

  m.def(
      "read_png", [](const std::filesystem::path& p) { return array_from_image(read_gray_png(p)); },
      py::arg("path"), "Read a PNG as a 2-D uint8 array (color converted to BT.601 luma).");
  m.def(
      "write_png",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a,
         const std::filesystem::path& p) { write_gray_png(image_from_array(a), p); },
      py::arg("image"), py::arg("path"), "Write a 2-D uint8 array as an 8-bit grayscale PNG.");

  m.def(
      "row_profile",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a) {
        const RowProfile p = row_profile(image_from_array(a));
        py::array_t<double> out(py::ssize_t(p.size()));
        std::copy(p.begin(), p.end(), out.mutable_data());
        return out;
      },
      py::arg("image"), "Per-row mean intensity.");
  m.def(
      "resize_bilinear",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a, int width,
         int height) { return array_from_image(resize_bilinear(image_from_array(a), width, height)); },
      py::arg("image"), py::arg("width"), py::arg("height"));
  m.def(
      "pad_vertical",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a, int top,
         int bottom, int fill) {
        return array_from_image(pad_vertical(image_from_array(a), top, bottom, uint8_t(fill)));
      },
      py::arg("image"), py::arg("top"), py::arg("bottom"), py::arg("fill"));
  m.def(
      "crop_vertical",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a, int row0,
         int row1) { return array_from_image(crop_vertical(image_from_array(a), row0, row1)); },
      py::arg("image"), py::arg("row0"), py::arg("row1"));
  m.def(
      "estimate_background",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a) {
        return int(estimate_background(image_from_array(a)));
      },
      py::arg("image"), "Median of the border pixels.");

  m.def(
      "two_means_1d",
      [](const std::vector<double>& values, double tol, int max_iter) {
        const TwoMeansResult r = two_means_1d(values, tol, max_iter);
        py::dict d;
        d["centroid_lo"] = r.centroid_lo;
        d["centroid_hi"] = r.centroid_hi;
        d["labels"] = r.labels;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("values"), py::arg("tol") = 0.5, py::arg("max_iter") = 100,
      "1-D 2-means: returns dict with centroid_lo, centroid_hi, labels, iterations.");

  m.def(
      "detect_word_band",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a,
         double min_contrast) -> py::object {
        try {
          const WordBand band = detect_word_band(image_from_array(a), min_contrast);
          return py::make_tuple(band.top_row, band.bottom_row);
        } catch (const NoTextFound&) {
          return py::none();
        }
      },
      py::arg("image"), py::arg("min_contrast") = 8.0,
      "(top_row, bottom_row) of the detected text band, or None.");

  m.def(
      "normalize_profile",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a,
         int target_profile_height, int target_box_height, double min_contrast) {
        NormalizationParams params;
        params.target_profile_height = target_profile_height;
        params.target_box_height = target_box_height;
        params.min_contrast = min_contrast;
        auto [out, report] = normalize_profile(image_from_array(a), params);
        return py::make_tuple(array_from_image(out), report_to_dict(report));
      },
      py::arg("image"), py::arg("target_profile_height") = 20, py::arg("target_box_height") = 32,
      py::arg("min_contrast") = 8.0,
      "Profile-normalize one box; returns (image, report dict).");

  m.def(
      "render_word",
      [](const std::string& word, const std::filesystem::path& font_path, double size_px,
         int margin) {
        const ttf::Font font = ttf::Font::load(font_path);
        const GlyphMask mask = render_word(word, font, size_px, margin);
        py::array_t<float> alpha({mask.height, mask.width});
        std::copy(mask.alpha.begin(), mask.alpha.end(), alpha.mutable_data());
        return py::make_tuple(alpha, mask.glyph_top, mask.glyph_bottom);
      },
      py::arg("word"), py::arg("font_path"), py::arg("size_px"), py::arg("margin") = 4,
      "Rasterize a word; returns (alpha mask, glyph_top, glyph_bottom).");

  m.def(
      "compose",
      [](const py::array_t<float, py::array::c_style | py::array::forcecast>& alpha,
         const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& background,
         int text_intensity) {
        if (alpha.ndim() != 2) throw py::value_error("alpha must be 2-D");
        GlyphMask mask;
        mask.height = int(alpha.shape(0));
        mask.width = int(alpha.shape(1));
        mask.alpha.assign(alpha.data(), alpha.data() + size_t(mask.height) * size_t(mask.width));
        return array_from_image(
            compose(mask, image_from_array(background), uint8_t(text_intensity)));
      },
      py::arg("alpha"), py::arg("background"), py::arg("text_intensity"),
      "Alpha-composite a coverage mask over a background patch.");

  m.def(
      "generate_dataset",
      [](const std::filesystem::path& config_path, size_t count,
         const std::filesystem::path& out_dir, int jobs) {
        const GeneratorConfig config = parse_generator_config(config_path);
        const Manifest manifest = generate_dataset(config, count, out_dir, jobs);
        return manifest.entries.size();
      },
      py::arg("config_path"), py::arg("count"), py::arg("out_dir"), py::arg("jobs") = 1,
      "Generate synthetic word boxes; returns the number generated.");

  m.def(
      "apply_policy",
      [](const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& a,
         const std::string& policy_json, uint64_t item_index) {
        const AugmentationPolicy policy = parse_policy_text(policy_json);
        return array_from_image(apply_policy(image_from_array(a), policy, item_index));
      },
      py::arg("image"), py::arg("policy_json"), py::arg("item_index") = 0,
      "Apply an augmentation policy (JSON text) to one image.");

  m.def(
      "normalize_dataset",
      [](const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir,
         int target_profile_height, int target_box_height, double min_contrast, int jobs) {
        const Manifest manifest = read_manifest(manifest_path);
        NormalizationParams params;
        params.target_profile_height = target_profile_height;
        params.target_box_height = target_box_height;
        params.min_contrast = min_contrast;
        const NormalizeDatasetResult r =
            normalize_dataset(manifest, manifest_path.parent_path(), params, out_dir, jobs);
        py::dict d;
        d["normalized"] = r.normalized;
        d["fallbacks"] = r.fallbacks;
        d["failures"] = r.failures;
        return d;
      },
      py::arg("manifest_path"), py::arg("out_dir"), py::arg("target_profile_height") = 20,
      py::arg("target_box_height") = 32, py::arg("min_contrast") = 8.0, py::arg("jobs") = 1,
      "Normalize a whole dataset; returns a summary dict.");

  m.def(
      "sample_subset",
      [](const std::filesystem::path& manifest_in, size_t size, uint64_t seed,
         const std::filesystem::path& manifest_out) {
        const Manifest manifest = read_manifest(manifest_in);
        write_manifest(sample_subset(manifest, size, seed), manifest_out);
      },
      py::arg("manifest_in"), py::arg("size"), py::arg("seed"), py::arg("manifest_out"),
      "Deterministic nested train-split subsampling.");

  m.def("levenshtein",
        [](const std::string& a, const std::string& b) { return levenshtein(a, b); },
        py::arg("a"), py::arg("b"), "Edit distance over Unicode scalar values.");

  m.def(
      "score",
      [](const std::filesystem::path& manifest_path, const std::filesystem::path& predictions_path,
         const std::string& split, bool case_fold) {
        const Manifest manifest = read_manifest(manifest_path);
        const PredictionSet preds = read_predictions(predictions_path);
        const ScoreReport r = score(preds, manifest, split_from_string(split), case_fold);
        py::dict d;
        d["word_accuracy"] = r.word_accuracy;
        d["char_error_rate"] =
            r.char_error_rate ? py::object(py::float_(*r.char_error_rate)) : py::object(py::none());
        d["n_scored"] = r.n_scored;
        d["n_missing"] = r.n_missing;
        return d;
      },
      py::arg("manifest_path"), py::arg("predictions_path"), py::arg("split") = "test",
      py::arg("case_fold") = true, "Score a predictions file against a manifest split.");
}
