#include "buoybench/augment.hpp"

#include <algorithm>
#include <cmath>

namespace buoybench {

namespace {

Sample resize_sample(const Sample& s, ImageDims target) {
    if (s.dims() == target) return s;
    Sample out;
    out.image = resize(s.image, target.width, target.height);
    out.annotations = s.annotations;  // normalized, so unchanged
    out.anchors.reserve(s.anchors.size());
    double sx = double(target.width) / s.dims().width;
    double sy = double(target.height) / s.dims().height;
    for (const auto& a : s.anchors)
        out.anchors.emplace_back(a.x() * sx, a.y() * sy);
    return out;
}

struct BoxFilter {
    const AugmentConfig& cfg;
    bool keep(const BBoxAbs& clipped, double pre_clip_area) const {
        double a = clipped.area();
        if (a < cfg.min_box_area_px) return false;
        if (pre_clip_area > 0 && a / pre_clip_area < cfg.min_visibility)
            return false;
        double w = clipped.width(), h = clipped.height();
        double ar = std::max(w, h) / std::max(1e-9, std::min(w, h));
        return ar <= cfg.max_aspect_ratio;
    }
};

}  // namespace

Sample hsv_jitter(const Sample& s, double gain_h, double gain_s, double gain_v,
                  Rng& rng) {
    if (gain_h == 0 && gain_s == 0 && gain_v == 0) return s;
    float fh = float(rng.uniform(1 - gain_h, 1 + gain_h));
    float fs = float(rng.uniform(1 - gain_s, 1 + gain_s));
    float fv = float(rng.uniform(1 - gain_v, 1 + gain_v));
    Sample out = s;
    const int w = s.dims().width, h = s.dims().height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            float hh, ss, vv;
            rgb_to_hsv(out.image.ch[0](y, x), out.image.ch[1](y, x),
                       out.image.ch[2](y, x), hh, ss, vv);
            hh = std::fmod(hh * fh, 360.f);
            if (hh < 0) hh += 360.f;
            ss = std::clamp(ss * fs, 0.f, 1.f);
            vv = std::clamp(vv * fv, 0.f, 1.f);
            float r, g, b;
            hsv_to_rgb(hh, ss, vv, r, g, b);
            out.image.ch[0](y, x) = r;
            out.image.ch[1](y, x) = g;
            out.image.ch[2](y, x) = b;
        }
    }
    out.image.quantize();
    return out;
}

Sample flip_lr(const Sample& s) {
    Sample out = s;
    for (int c = 0; c < 3; ++c) out.image.ch[c] = s.image.ch[c].rowwise().reverse();
    for (auto& a : out.annotations) a.box.cx = 1.0 - a.box.cx;
    for (auto& p : out.anchors) p.x() = double(s.dims().width) - p.x();
    return out;
}

Sample flip_ud(const Sample& s) {
    Sample out = s;
    for (int c = 0; c < 3; ++c) out.image.ch[c] = s.image.ch[c].colwise().reverse();
    for (auto& a : out.annotations) a.box.cy = 1.0 - a.box.cy;
    for (auto& p : out.anchors) p.y() = double(s.dims().height) - p.y();
    return out;
}

Sample affine(const Sample& s, const AugmentConfig& cfg, Rng& rng,
              ImageDims out_dims, const Eigen::Matrix3d& pre) {
    const double w = s.dims().width, h = s.dims().height;
    const double ow = out_dims.width, oh = out_dims.height;

    Eigen::Matrix3d C = Eigen::Matrix3d::Identity();
    C(0, 2) = -w / 2.0;
    C(1, 2) = -h / 2.0;

    Eigen::Matrix3d P = Eigen::Matrix3d::Identity();
    P(2, 0) = rng.uniform(-cfg.perspective, cfg.perspective);
    P(2, 1) = rng.uniform(-cfg.perspective, cfg.perspective);

    double angle = rng.uniform(-cfg.degrees, cfg.degrees) * M_PI / 180.0;
    double k = rng.uniform(1 - cfg.scale, 1 + cfg.scale);
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    R(0, 0) = k * std::cos(angle);
    R(0, 1) = -k * std::sin(angle);
    R(1, 0) = k * std::sin(angle);
    R(1, 1) = k * std::cos(angle);

    Eigen::Matrix3d Sh = Eigen::Matrix3d::Identity();
    Sh(0, 1) = std::tan(rng.uniform(-cfg.shear, cfg.shear) * M_PI / 180.0);
    Sh(1, 0) = std::tan(rng.uniform(-cfg.shear, cfg.shear) * M_PI / 180.0);

    Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
    T(0, 2) = rng.uniform(0.5 - cfg.translate, 0.5 + cfg.translate) * ow;
    T(1, 2) = rng.uniform(0.5 - cfg.translate, 0.5 + cfg.translate) * oh;

    Eigen::Matrix3d M = T * Sh * R * P * C * pre;

    Sample out;
    out.image = warp(s.image, M, out_dims.width, out_dims.height, kBorderFill);
    out.image.quantize();

    auto apply = [&](double x, double y) {
        Eigen::Vector3d p = M * Eigen::Vector3d(x, y, 1.0);
        return Eigen::Vector2d(p.x() / p.z(), p.y() / p.z());
    };

    BoxFilter filter{cfg};
    const bool has_anchors = s.anchors.size() == s.annotations.size();
    for (std::size_t i = 0; i < s.annotations.size(); ++i) {
        BBoxAbs b = to_abs(s.annotations[i].box, s.dims());
        Eigen::Vector2d c1 = apply(b.x1, b.y1), c2 = apply(b.x2, b.y1);
        Eigen::Vector2d c3 = apply(b.x1, b.y2), c4 = apply(b.x2, b.y2);
        BBoxAbs t{std::min({c1.x(), c2.x(), c3.x(), c4.x()}),
                  std::min({c1.y(), c2.y(), c3.y(), c4.y()}),
                  std::max({c1.x(), c2.x(), c3.x(), c4.x()}),
                  std::max({c1.y(), c2.y(), c3.y(), c4.y()})};
        double pre_area = t.area();
        BBoxAbs clipped = clip(t, out_dims);
        if (!filter.keep(clipped, pre_area)) continue;
        out.annotations.push_back(
            {s.annotations[i].class_id, to_norm(clipped, out_dims)});
        if (has_anchors) {
            Eigen::Vector2d a = apply(s.anchors[i].x(), s.anchors[i].y());
            out.anchors.emplace_back(std::clamp(a.x(), 0.0, ow),
                                     std::clamp(a.y(), 0.0, oh));
        }
    }
    return out;
}

Sample mosaic(const std::vector<Sample>& samples, ImageDims target, Rng& rng) {
    if (samples.size() != 4)
        throw std::invalid_argument("mosaic needs exactly 4 samples");
    const int W = target.width, H = target.height;
    const ImageDims canvas_dims{2 * W, 2 * H};
    // Center point uniform over the central half of the 2x canvas.
    const int mcx = W / 2 + int(rng.below(std::uint64_t(W) + 1));
    const int mcy = H / 2 + int(rng.below(std::uint64_t(H) + 1));

    Sample out;
    out.image = Image(2 * W, 2 * H, kBorderFill);
    AugmentConfig default_cfg;
    BoxFilter filter{default_cfg};
    bool all_anchored = true;
    for (const auto& s : samples)
        all_anchored = all_anchored && s.anchors.size() == s.annotations.size();

    for (int q = 0; q < 4; ++q) {
        Sample s = resize_sample(samples[std::size_t(q)], target);
        // Quadrant corner of the resized image meets the center point.
        const int ox = (q % 2 == 0) ? mcx - W : mcx;
        const int oy = (q < 2) ? mcy - H : mcy;

        const int x_lo = std::max(0, ox), x_hi = std::min(2 * W, ox + W);
        const int y_lo = std::max(0, oy), y_hi = std::min(2 * H, oy + H);
        for (int y = y_lo; y < y_hi; ++y)
            for (int x = x_lo; x < x_hi; ++x)
                for (int c = 0; c < 3; ++c)
                    out.image.ch[c](y, x) = s.image.ch[c](y - oy, x - ox);

        BBoxAbs region{double(x_lo), double(y_lo), double(x_hi), double(y_hi)};
        for (std::size_t i = 0; i < s.annotations.size(); ++i) {
            BBoxAbs b = to_abs(s.annotations[i].box, target);
            b = {b.x1 + ox, b.y1 + oy, b.x2 + ox, b.y2 + oy};
            double pre_area = b.area();
            BBoxAbs clipped{std::clamp(b.x1, region.x1, region.x2),
                            std::clamp(b.y1, region.y1, region.y2),
                            std::clamp(b.x2, region.x1, region.x2),
                            std::clamp(b.y2, region.y1, region.y2)};
            if (!filter.keep(clipped, pre_area)) continue;
            out.annotations.push_back(
                {s.annotations[i].class_id, to_norm(clipped, canvas_dims)});
            if (all_anchored) {
                out.anchors.emplace_back(
                    std::clamp(s.anchors[i].x() + ox, region.x1, region.x2),
                    std::clamp(s.anchors[i].y() + oy, region.y1, region.y2));
            }
        }
    }
    if (!all_anchored) out.anchors.clear();
    return out;
}

Sample mixup(const Sample& a, const Sample& b_in, Rng& rng) {
    Sample b = resize_sample(b_in, a.dims());
    double lambda = rng.beta_symmetric(8);
    Sample out;
    out.image = Image(a.dims().width, a.dims().height);
    for (int c = 0; c < 3; ++c)
        out.image.ch[c] =
            float(lambda) * a.image.ch[c] + float(1 - lambda) * b.image.ch[c];
    out.image.quantize();
    out.annotations = a.annotations;
    out.annotations.insert(out.annotations.end(), b.annotations.begin(),
                           b.annotations.end());
    if (a.anchors.size() == a.annotations.size() &&
        b.anchors.size() == b.annotations.size()) {
        out.anchors = a.anchors;
        out.anchors.insert(out.anchors.end(), b.anchors.begin(),
                           b.anchors.end());
    } else {
        out.anchors.clear();
    }
    return out;
}

namespace {

Sample base_sample(const std::vector<Sample>& pool, std::size_t index,
                   const AugmentConfig& cfg, ImageDims target, Rng& rng,
                   bool* used_mosaic = nullptr) {
    if (rng.bernoulli(cfg.mosaic_prob)) {
        if (used_mosaic) *used_mosaic = true;
        std::vector<Sample> four;
        four.push_back(pool[index]);
        for (int i = 0; i < 3; ++i)
            four.push_back(pool[std::size_t(rng.below(pool.size()))]);
        return mosaic(four, target, rng);
    }
    return resize_sample(pool[index], target);
}

}  // namespace

Sample augment_sample(const std::vector<Sample>& pool, std::size_t index,
                      const AugmentConfig& cfg, ImageDims target,
                      AppliedOps* applied) {
    if (pool.empty()) throw std::invalid_argument("empty sample pool");
    if (!cfg.valid()) throw std::invalid_argument("invalid augment config");
    Rng rng = Rng(cfg.rng_seed).derive(index);
    AppliedOps ops;

    Sample s = base_sample(pool, index % pool.size(), cfg, target, rng,
                           &ops.mosaic);
    if (rng.bernoulli(cfg.mixup_prob)) {
        ops.mixup = true;
        std::size_t other = std::size_t(rng.below(pool.size()));
        Sample o = base_sample(pool, other, cfg, target, rng);
        s = mixup(s, o, rng);
    }
    s = affine(s, cfg, rng, target);
    s = hsv_jitter(s, cfg.hsv_h, cfg.hsv_s, cfg.hsv_v, rng);
    if (rng.bernoulli(cfg.flip_ud_prob)) {
        ops.flip_ud = true;
        s = flip_ud(s);
    }
    if (rng.bernoulli(cfg.flip_lr_prob)) {
        ops.flip_lr = true;
        s = flip_lr(s);
    }
    if (applied) *applied = ops;
    return s;
}

std::vector<Sample> augment_pipeline(const std::vector<Sample>& pool,
                                     std::size_t count,
                                     const AugmentConfig& cfg,
                                     ImageDims target) {
    std::vector<Sample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(augment_sample(pool, i, cfg, target));
    return out;
}

}  // namespace buoybench
