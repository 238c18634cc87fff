#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "buoybench/dataset.hpp"
#include "buoybench/image.hpp"
#include "buoybench/rng.hpp"

namespace buoybench {

struct AugmentConfig {
    double hsv_h = 0.015;
    double hsv_s = 0.7;
    double hsv_v = 0.4;
    double degrees = 0.0;
    double translate = 0.1;
    double scale = 0.5;
    double shear = 0.0;
    double perspective = 0.0;
    double flip_ud_prob = 0.0;
    double flip_lr_prob = 0.5;
    double mosaic_prob = 1.0;
    double mixup_prob = 0.05;
    std::uint64_t rng_seed = 0;

    // Post-transform box filter.
    double min_box_area_px = 2.0;
    double min_visibility = 0.10;  // kept area / pre-clip area
    double max_aspect_ratio = 20.0;

    bool valid() const {
        auto prob = [](double p) { return p >= 0 && p <= 1; };
        return hsv_h >= 0 && hsv_s >= 0 && hsv_v >= 0 && degrees >= 0 &&
               translate >= 0 && scale >= 0 && shear >= 0 && perspective >= 0 &&
               prob(flip_ud_prob) && prob(flip_lr_prob) && prob(mosaic_prob) &&
               prob(mixup_prob);
    }

    static AugmentConfig identity() {
        AugmentConfig c;
        c.hsv_h = c.hsv_s = c.hsv_v = 0;
        c.translate = c.scale = 0;
        c.flip_lr_prob = c.mosaic_prob = c.mixup_prob = 0;
        return c;
    }
};

/// Image plus labels. `anchors` optionally carries one reference point per
/// annotation (pixel coords, e.g. the source buoy centroid); geometric ops
/// transform them alongside the boxes, clamped to the canvas on clipping.
struct Sample {
    Image image;
    std::vector<Annotation> annotations;
    std::vector<Eigen::Vector2d> anchors;  // empty or parallel to annotations

    ImageDims dims() const { return image.dims(); }
};

/// Border fill for warps.
constexpr std::uint8_t kBorderFill = 114;

/// Multiplicative HSV perturbation; hue wraps, saturation/value clamp.
/// Boxes untouched. Zero gains short-circuit to the identity.
Sample hsv_jitter(const Sample& s, double gain_h, double gain_s, double gain_v,
                  Rng& rng);

Sample flip_lr(const Sample& s);
Sample flip_ud(const Sample& s);

/// Random affine (scale/translate, plus rotation/shear/perspective when
/// configured) resampled onto an out_dims canvas. `pre` composes an extra
/// transform in source coordinates (used to recrop mosaics).
Sample affine(const Sample& s, const AugmentConfig& cfg, Rng& rng,
              ImageDims out_dims,
              const Eigen::Matrix3d& pre = Eigen::Matrix3d::Identity());

/// Four inputs on a 2x canvas split at a random center point in the central
/// half; boxes remapped and clipped per quadrant.
Sample mosaic(const std::vector<Sample>& samples, ImageDims target, Rng& rng);

/// Pixelwise blend lambda*a + (1-lambda)*b, lambda ~ Beta(8,8); labels are
/// the union. b is resized to a's dims if needed.
Sample mixup(const Sample& a, const Sample& b, Rng& rng);

struct AppliedOps {
    bool mosaic = false;
    bool mixup = false;
    bool flip_ud = false;
    bool flip_lr = false;
};

/// Full per-sample pipeline: mosaic (gated) -> mixup (gated) -> affine ->
/// hsv -> flips. Deterministic in (cfg.rng_seed, index).
Sample augment_sample(const std::vector<Sample>& pool, std::size_t index,
                      const AugmentConfig& cfg, ImageDims target,
                      AppliedOps* applied = nullptr);

std::vector<Sample> augment_pipeline(const std::vector<Sample>& pool,
                                     std::size_t count,
                                     const AugmentConfig& cfg,
                                     ImageDims target);

}  // namespace buoybench
