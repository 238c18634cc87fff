#include "buoybench/synthfarm.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace buoybench {
namespace fs = std::filesystem;

std::string to_string(Weather w) {
    switch (w) {
        case Weather::clear: return "clear";
        case Weather::choppy: return "choppy";
        case Weather::foggy: return "foggy";
        case Weather::adverse: return "adverse";
    }
    return "clear";
}

Weather weather_from_string(const std::string& s) {
    if (s == "clear") return Weather::clear;
    if (s == "choppy") return Weather::choppy;
    if (s == "foggy") return Weather::foggy;
    if (s == "adverse") return Weather::adverse;
    throw std::invalid_argument("unknown weather: " + s);
}

namespace {

void paint_background(Image& img, double horizon_y) {
    const int w = img.width(), h = img.height();
    const int hy = int(horizon_y * h);
    for (int y = 0; y < h; ++y) {
        float r, g, b;
        if (y < hy) {
            float t = hy > 0 ? float(y) / float(hy) : 0.f;  // 0 top, 1 horizon
            r = 150 + 60 * t;
            g = 175 + 50 * t;
            b = 205 + 35 * t;
        } else {
            float t = float(y - hy) / float(std::max(1, h - hy));
            r = 55 + 25 * t;
            g = 95 + 35 * t;
            b = 125 + 35 * t;
        }
        img.ch[0].row(y).setConstant(r);
        img.ch[1].row(y).setConstant(g);
        img.ch[2].row(y).setConstant(b);
    }
    (void)w;
}

struct EllipseSpec {
    double cx, cy, rx, ry;
    bool contains(double x, double y) const {
        double dx = (x - cx) / rx, dy = (y - cy) / ry;
        return dx * dx + dy * dy <= 1.0;
    }
};

/// Visible fraction: inside the canvas and not covered by any nearer buoy.
/// Sampled on the ellipse's own pixel grid.
double visible_fraction(const EllipseSpec& e, const ImageDims& dims,
                        const std::vector<EllipseSpec>& nearer) {
    int total = 0, visible = 0;
    int x_lo = int(std::floor(e.cx - e.rx)), x_hi = int(std::ceil(e.cx + e.rx));
    int y_lo = int(std::floor(e.cy - e.ry)), y_hi = int(std::ceil(e.cy + e.ry));
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            double px = x + 0.5, py = y + 0.5;
            if (!e.contains(px, py)) continue;
            ++total;
            if (px < 0 || py < 0 || px >= dims.width || py >= dims.height) continue;
            bool covered = false;
            for (const auto& n : nearer)
                if (n.contains(px, py)) {
                    covered = true;
                    break;
                }
            if (!covered) ++visible;
        }
    }
    return total > 0 ? double(visible) / double(total) : 0.0;
}

void composite_fog(Image& img, double alpha) {
    const float fog[3] = {235, 235, 240};
    for (int c = 0; c < 3; ++c)
        img.ch[c] = (1.0f - float(alpha)) * img.ch[c] + float(alpha) * fog[c];
}

void composite_ripple(Image& img, double horizon_y, Rng& rng) {
    const int h = img.height(), w = img.width();
    const int hy = int(horizon_y * h);
    double p1 = rng.uniform(0, 2 * M_PI), p2 = rng.uniform(0, 2 * M_PI);
    double f1 = rng.uniform(0.05, 0.12), f2 = rng.uniform(0.15, 0.30);
    for (int y = hy; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 9.0 * std::sin(f1 * x + 0.37 * y + p1) +
                       5.0 * std::sin(f2 * x - 0.21 * y + p2);
            for (int c = 0; c < 3; ++c)
                img.ch[c](y, x) =
                    float(std::clamp(img.ch[c](y, x) + v, 0.0, 255.0));
        }
    }
}

void composite_rain(Image& img, double density, Rng& rng) {
    const int w = img.width(), h = img.height();
    const int n = int(density * w * h);
    for (int i = 0; i < n; ++i) {
        double x = rng.uniform(0, w), y = rng.uniform(0, h);
        int len = 6 + int(rng.below(10));
        double slope = rng.uniform(0.2, 0.5);
        for (int k = 0; k < len; ++k) {
            int px = int(x + slope * k), py = int(y + k);
            if (px < 0 || py < 0 || px >= w || py >= h) break;
            for (int c = 0; c < 3; ++c)
                img.ch[c](py, px) =
                    std::min(255.f, img.ch[c](py, px) * 0.6f + 120.f);
        }
    }
}

void composite_noise(Image& img, double sigma, Rng& rng) {
    const int w = img.width(), h = img.height();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double v = sigma * rng.normal();
            for (int c = 0; c < 3; ++c)
                img.ch[c](y, x) =
                    float(std::clamp(img.ch[c](y, x) + v, 0.0, 255.0));
        }
}

}  // namespace

SceneTruth generate_scene(const SceneConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("invalid scene config");
    Rng rng(cfg.rng_seed);
    const int w = cfg.dims.width, h = cfg.dims.height;
    const double hy = cfg.horizon_y * h;
    const double r0 =
        cfg.base_radius > 0 ? cfg.base_radius : 0.04 * std::min(w, h);

    SceneTruth out;
    out.image = Image(w, h);
    paint_background(out.image, cfg.horizon_y);

    // Vanishing point near the horizontal center of the horizon.
    const double vx = w * rng.uniform(0.35, 0.65);
    const double vy = hy;

    std::vector<EllipseSpec> ellipses;  // parallel to out.buoys
    for (int line = 0; line < cfg.n_lines; ++line) {
        double x_near =
            w * (cfg.n_lines > 1
                     ? 0.1 + 0.8 * double(line) / double(cfg.n_lines - 1)
                     : 0.5) +
            w * rng.uniform(-0.04, 0.04);
        double y_near = h * rng.uniform(0.86, 0.95);
        for (int k = 0; k < cfg.buoys_per_line; ++k) {
            // Depth parameter approaches the vanishing point geometrically.
            double t = 1.0 - std::pow(0.78, k);
            double cx = x_near + (vx - x_near) * t + rng.uniform(-2.0, 2.0);
            double cy = y_near + (vy + 0.02 * h - y_near) * t + rng.uniform(-1.5, 1.5);
            double r = r0 * std::pow(cfg.perspective_decay, k);
            BuoyTruth b;
            b.cx = cx;
            b.cy = cy;
            b.rx = r;
            b.ry = 0.75 * r;
            b.line_index = line;
            b.depth_index = k;
            b.visibility = 0;
            b.occluded = false;
            out.buoys.push_back(b);
            ellipses.push_back({cx, cy, b.rx, b.ry});
        }
    }

    // Far to near so near buoys occlude far ones.
    std::vector<std::size_t> order(out.buoys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.buoys[a].depth_index > out.buoys[b].depth_index;
    });
    const std::array<std::uint8_t, 3> buoy_color = {30, 35, 45};
    for (std::size_t i : order) {
        const auto& b = out.buoys[i];
        draw_shaded_ellipse(out.image, b.cx, b.cy, b.rx, b.ry, buoy_color);
    }

    // Truth capture precedes weather compositing.
    for (std::size_t i = 0; i < out.buoys.size(); ++i) {
        auto& b = out.buoys[i];
        std::vector<EllipseSpec> nearer;
        for (std::size_t j = 0; j < out.buoys.size(); ++j)
            if (out.buoys[j].depth_index < b.depth_index) nearer.push_back(ellipses[j]);
        b.visibility = visible_fraction(ellipses[i], cfg.dims, nearer);
        b.occluded = b.visibility < 0.999;
        if (b.visibility < kAnnotationVisibility) continue;
        BBoxAbs box = clip({b.cx - b.rx, b.cy - b.ry, b.cx + b.rx, b.cy + b.ry},
                           cfg.dims);
        if (box.area() <= 0) continue;
        out.annotations.push_back({0, to_norm(box, cfg.dims)});
        out.annotation_buoy.push_back(i);
    }

    switch (cfg.weather) {
        case Weather::clear:
            break;
        case Weather::choppy:
            composite_ripple(out.image, cfg.horizon_y, rng);
            break;
        case Weather::foggy:
            composite_fog(out.image, cfg.fog_alpha);
            break;
        case Weather::adverse:
            composite_ripple(out.image, cfg.horizon_y, rng);
            composite_fog(out.image, cfg.fog_alpha);
            composite_rain(out.image, cfg.rain_density, rng);
            composite_noise(out.image, cfg.noise_sigma, rng);
            break;
    }
    out.image.quantize();
    return out;
}

DatasetManifest generate_dataset(const SceneConfig& tmpl, int n_images,
                                 std::uint64_t seed, const std::string& out_dir,
                                 const std::string& name) {
    if (n_images <= 0) throw std::invalid_argument("n_images must be positive");
    fs::create_directories(fs::path(out_dir) / "images");
    fs::create_directories(fs::path(out_dir) / "labels");

    DatasetManifest m;
    m.name = name;
    m.source = tmpl.weather == Weather::adverse ? Source::adverse
                                                : Source::synthetic;
    Rng base(seed);
    for (int i = 0; i < n_images; ++i) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "img_%05d", i);
        fs::path img_rel = fs::path("images") / (std::string(stem) + ".bmp");
        fs::path lbl_rel = fs::path("labels") / (std::string(stem) + ".txt");
        fs::path img_abs = fs::path(out_dir) / img_rel;
        fs::path lbl_abs = fs::path(out_dir) / lbl_rel;
        if (fs::exists(img_abs))
            throw std::runtime_error("output collision: " + img_abs.string());

        SceneConfig cfg = tmpl;
        cfg.rng_seed = base.derive(std::uint64_t(i)).next_u64();
        SceneTruth scene = generate_scene(cfg);
        write_bmp(scene.image, img_abs.string());
        std::ofstream lf(lbl_abs, std::ios::binary);
        lf << serialize_labels(scene.annotations);

        ManifestEntry e;
        e.image_path = img_rel.generic_string();
        e.dims = cfg.dims;
        e.label_path = lbl_rel.generic_string();
        e.annotations = scene.annotations;
        m.entries.push_back(std::move(e));
    }
    save_manifest(m, (fs::path(out_dir) / "manifest.txt").string());
    return m;
}

PerturbResult perturb_predictions(const std::vector<Annotation>& truth,
                                  const ImageDims& dims, const ErrorModel& em,
                                  Rng& rng, double horizon_y) {
    PerturbResult out;
    for (const auto& gt : truth) {
        if (rng.bernoulli(em.drop_rate)) {
            ++out.n_dropped;
            continue;
        }
        BBoxAbs b = to_abs(gt.box, dims);
        if (em.jitter_sigma > 0) {
            b.x1 += em.jitter_sigma * rng.normal();
            b.y1 += em.jitter_sigma * rng.normal();
            b.x2 += em.jitter_sigma * rng.normal();
            b.y2 += em.jitter_sigma * rng.normal();
            if (b.x1 > b.x2) std::swap(b.x1, b.x2);
            if (b.y1 > b.y2) std::swap(b.y1, b.y2);
            b = clip(b, dims);
            if (b.area() <= 0) {
                ++out.n_dropped;
                continue;
            }
        }
        double conf = rng.uniform(em.kept_conf_lo, em.kept_conf_hi);
        out.detections.push_back({gt.class_id, to_norm(b, dims), conf});
        ++out.n_kept;
    }
    // Spurious boxes land in the sea region.
    int n_spurious = int(std::floor(em.spurious_rate)) +
                     (rng.bernoulli(em.spurious_rate -
                                    std::floor(em.spurious_rate))
                          ? 1
                          : 0);
    for (int i = 0; i < n_spurious; ++i) {
        double rw = rng.uniform(0.01, 0.06), rh = rng.uniform(0.01, 0.05);
        double cx = rng.uniform(rw / 2, 1 - rw / 2);
        double cy = rng.uniform(horizon_y + rh / 2,
                                std::max(horizon_y + rh, 1.0 - rh / 2));
        cy = std::min(cy, 1 - rh / 2);
        double conf = rng.uniform(em.spurious_conf_lo, em.spurious_conf_hi);
        out.detections.push_back({0, {cx, cy, rw, rh}, conf});
        ++out.n_spurious;
    }
    return out;
}

}  // namespace buoybench
