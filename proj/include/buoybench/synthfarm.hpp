#pragma once

#include <string>
#include <vector>

#include "buoybench/dataset.hpp"
#include "buoybench/image.hpp"
#include "buoybench/rng.hpp"

namespace buoybench {

enum class Weather { clear, choppy, foggy, adverse };

std::string to_string(Weather w);
Weather weather_from_string(const std::string& s);

struct SceneConfig {
    ImageDims dims{640, 480};
    int n_lines = 3;
    int buoys_per_line = 6;
    double horizon_y = 0.35;        // fraction of height
    double perspective_decay = 0.8; // radius shrink per depth step, in (0,1]
    double base_radius = 0;         // px; 0 means 4% of min(dims)
    Weather weather = Weather::clear;
    double fog_alpha = 0.5;
    double noise_sigma = 8.0;       // 8-bit levels
    double rain_density = 0.0015;   // streaks per pixel
    std::uint64_t rng_seed = 0;

    bool valid() const {
        return dims.valid() && n_lines >= 0 && buoys_per_line >= 0 &&
               horizon_y > 0 && horizon_y < 1 && perspective_decay > 0 &&
               perspective_decay <= 1 && fog_alpha >= 0 && fog_alpha <= 1;
    }
};

struct BuoyTruth {
    double cx, cy;      // ellipse center, px
    double rx, ry;      // ellipse radii, px
    int line_index;
    int depth_index;    // 0 = nearest
    double visibility;  // visible fraction of the ellipse
    bool occluded;
};

struct SceneTruth {
    Image image;
    std::vector<Annotation> annotations;  // buoys with visibility >= 0.25
    std::vector<BuoyTruth> buoys;         // all rendered buoys
    std::vector<std::size_t> annotation_buoy;  // annotation -> buoys index
};

/// Visibility below which a buoy is rendered but not annotated.
constexpr double kAnnotationVisibility = 0.25;

/// Deterministic per seed. Truth is captured before weather compositing,
/// so boxes tightly bound the clean ellipses.
SceneTruth generate_scene(const SceneConfig& cfg);

/// n_images scenes with per-image derived seeds; images and label files are
/// written under out_dir, plus a manifest.txt. Existing files collide.
DatasetManifest generate_dataset(const SceneConfig& tmpl, int n_images,
                                 std::uint64_t seed, const std::string& out_dir,
                                 const std::string& name);

struct ErrorModel {
    double drop_rate = 0;       // probability a GT box goes undetected
    double jitter_sigma = 0;    // px, Gaussian on each box corner
    double spurious_rate = 0;   // expected false boxes per image
    double kept_conf_lo = 0.6, kept_conf_hi = 0.99;
    double spurious_conf_lo = 0.05, spurious_conf_hi = 0.5;
};

struct PerturbResult {
    std::vector<Detection> detections;
    int n_kept = 0;
    int n_dropped = 0;
    int n_spurious = 0;
};

/// Manufactures a prediction set with known TP/FP/FN composition from exact
/// ground truth.
PerturbResult perturb_predictions(const std::vector<Annotation>& truth,
                                  const ImageDims& dims, const ErrorModel& em,
                                  Rng& rng, double horizon_y = 0.35);

}  // namespace buoybench
