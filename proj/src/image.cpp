#include "buoybench/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace buoybench {

namespace {
inline std::uint8_t to_u8(float v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}
}  // namespace

void Image::quantize() {
    for (auto& p : ch)
        p = p.unaryExpr([](float v) { return float(to_u8(v)); });
}

bool Image::operator==(const Image& o) const {
    if (width() != o.width() || height() != o.height()) return false;
    for (int c = 0; c < 3; ++c)
        if (!(ch[c] == o.ch[c]).all()) return false;
    return true;
}

double mean_luma(const Image& img) {
    if (img.width() == 0 || img.height() == 0) return 0.0;
    double y = 0.299 * img.ch[0].mean() + 0.587 * img.ch[1].mean() +
               0.114 * img.ch[2].mean();
    return y / 255.0;
}

void write_bmp(const Image& img, const std::string& path) {
    const int w = img.width(), h = img.height();
    const int row_bytes = (3 * w + 3) / 4 * 4;
    const std::uint32_t data_size = std::uint32_t(row_bytes) * std::uint32_t(h);
    const std::uint32_t file_size = 54 + data_size;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);

    auto put16 = [&](std::uint16_t v) { out.write(reinterpret_cast<char*>(&v), 2); };
    auto put32 = [&](std::uint32_t v) { out.write(reinterpret_cast<char*>(&v), 4); };

    out.write("BM", 2);
    put32(file_size);
    put32(0);
    put32(54);
    put32(40);  // BITMAPINFOHEADER
    put32(std::uint32_t(w));
    put32(std::uint32_t(h));
    put16(1);
    put16(24);
    put32(0);
    put32(data_size);
    put32(2835);
    put32(2835);
    put32(0);
    put32(0);

    std::vector<char> row(row_bytes, 0);
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            row[3 * x + 0] = char(to_u8(img.ch[2](y, x)));
            row[3 * x + 1] = char(to_u8(img.ch[1](y, x)));
            row[3 * x + 2] = char(to_u8(img.ch[0](y, x)));
        }
        out.write(row.data(), row_bytes);
    }
}

Image read_bmp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<char> data((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    if (data.size() < 54 || data[0] != 'B' || data[1] != 'M')
        throw std::runtime_error("not a BMP file: " + path);

    auto get32 = [&](std::size_t off) {
        std::uint32_t v;
        std::memcpy(&v, data.data() + off, 4);
        return v;
    };
    auto get16 = [&](std::size_t off) {
        std::uint16_t v;
        std::memcpy(&v, data.data() + off, 2);
        return v;
    };

    const std::uint32_t offset = get32(10);
    const int w = int(get32(18));
    const int h = int(get32(22));
    if (get16(28) != 24 || get32(30) != 0)
        throw std::runtime_error("unsupported BMP variant: " + path);
    const int row_bytes = (3 * w + 3) / 4 * 4;
    if (data.size() < offset + std::size_t(row_bytes) * std::size_t(h))
        throw std::runtime_error("truncated BMP: " + path);

    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        const char* row = data.data() + offset + std::size_t(row_bytes) * (h - 1 - y);
        for (int x = 0; x < w; ++x) {
            img.ch[2](y, x) = float(std::uint8_t(row[3 * x + 0]));
            img.ch[1](y, x) = float(std::uint8_t(row[3 * x + 1]));
            img.ch[0](y, x) = float(std::uint8_t(row[3 * x + 2]));
        }
    }
    return img;
}

std::uint64_t image_hash(const Image& img) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&](std::uint8_t b) {
        h ^= b;
        h *= 0x100000001B3ULL;
    };
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) mix(to_u8(img.ch[c](y, x)));
    return h;
}

void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v) {
    r /= 255.f;
    g /= 255.f;
    b /= 255.f;
    float mx = std::max({r, g, b}), mn = std::min({r, g, b});
    float d = mx - mn;
    v = mx;
    s = mx > 0 ? d / mx : 0.f;
    if (d <= 0) {
        h = 0;
        return;
    }
    if (mx == r)
        h = 60.f * std::fmod((g - b) / d + 6.f, 6.f);
    else if (mx == g)
        h = 60.f * ((b - r) / d + 2.f);
    else
        h = 60.f * ((r - g) / d + 4.f);
}

void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b) {
    float c = v * s;
    float hp = h / 60.f;
    float x = c * (1.f - std::fabs(std::fmod(hp, 2.f) - 1.f));
    float r1 = 0, g1 = 0, b1 = 0;
    if (hp < 1) { r1 = c; g1 = x; }
    else if (hp < 2) { r1 = x; g1 = c; }
    else if (hp < 3) { g1 = c; b1 = x; }
    else if (hp < 4) { g1 = x; b1 = c; }
    else if (hp < 5) { r1 = x; b1 = c; }
    else { r1 = c; b1 = x; }
    float m = v - c;
    r = (r1 + m) * 255.f;
    g = (g1 + m) * 255.f;
    b = (b1 + m) * 255.f;
}

Image resize(const Image& img, int width, int height) {
    Image out(width, height);
    for (int y = 0; y < height; ++y) {
        int sy = std::min(int(double(y) * img.height() / height), img.height() - 1);
        for (int x = 0; x < width; ++x) {
            int sx = std::min(int(double(x) * img.width() / width), img.width() - 1);
            for (int c = 0; c < 3; ++c) out.ch[c](y, x) = img.ch[c](sy, sx);
        }
    }
    return out;
}

Image warp(const Image& img, const Eigen::Matrix3d& transform, int out_width,
           int out_height, std::uint8_t fill) {
    Eigen::Matrix3d inv = transform.inverse();
    Image out(out_width, out_height, fill);
    const int sw = img.width(), sh = img.height();
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            // Pixel centers at half-integer coordinates.
            Eigen::Vector3d p = inv * Eigen::Vector3d(x + 0.5, y + 0.5, 1.0);
            double sx = p.x() / p.z() - 0.5;
            double sy = p.y() / p.z() - 0.5;
            if (sx < -0.5 || sy < -0.5 || sx > sw - 0.5 || sy > sh - 0.5) continue;
            int x0 = int(std::floor(sx)), y0 = int(std::floor(sy));
            double fx = sx - x0, fy = sy - y0;
            auto sample = [&](int c, int yy, int xx) -> float {
                yy = std::clamp(yy, 0, sh - 1);
                xx = std::clamp(xx, 0, sw - 1);
                return img.ch[c](yy, xx);
            };
            for (int c = 0; c < 3; ++c) {
                double v = (1 - fx) * (1 - fy) * sample(c, y0, x0) +
                           fx * (1 - fy) * sample(c, y0, x0 + 1) +
                           (1 - fx) * fy * sample(c, y0 + 1, x0) +
                           fx * fy * sample(c, y0 + 1, x0 + 1);
                out.ch[c](y, x) = float(v);
            }
        }
    }
    return out;
}

void draw_rect(Image& img, const BBoxAbs& box, std::array<std::uint8_t, 3> color,
               int thickness) {
    int x1 = int(std::lround(box.x1)), y1 = int(std::lround(box.y1));
    int x2 = int(std::lround(box.x2)), y2 = int(std::lround(box.y2));
    for (int t = 0; t < thickness; ++t) {
        for (int x = std::max(0, x1); x <= std::min(img.width() - 1, x2); ++x) {
            for (int y : {y1 + t, y2 - t})
                if (y >= 0 && y < img.height())
                    img.set(x, y, color[0], color[1], color[2]);
        }
        for (int y = std::max(0, y1); y <= std::min(img.height() - 1, y2); ++y) {
            for (int x : {x1 + t, x2 - t})
                if (x >= 0 && x < img.width())
                    img.set(x, y, color[0], color[1], color[2]);
        }
    }
}

void draw_shaded_ellipse(Image& img, double cx, double cy, double rx, double ry,
                         std::array<std::uint8_t, 3> color) {
    int x_lo = std::max(0, int(std::floor(cx - rx)));
    int x_hi = std::min(img.width() - 1, int(std::ceil(cx + rx)));
    int y_lo = std::max(0, int(std::floor(cy - ry)));
    int y_hi = std::min(img.height() - 1, int(std::ceil(cy + ry)));
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            double dx = (x + 0.5 - cx) / rx;
            double dy = (y + 0.5 - cy) / ry;
            double d2 = dx * dx + dy * dy;
            if (d2 > 1.0) continue;
            // Brighter toward the upper-left rim, darker at the lower edge.
            double shade = 1.0 - 0.45 * (dy + 1.0) / 2.0 + 0.15 * (1.0 - d2);
            for (int c = 0; c < 3; ++c)
                img.ch[c](y, x) =
                    float(std::clamp(color[c] * shade, 0.0, 255.0));
        }
    }
}

}  // namespace buoybench
