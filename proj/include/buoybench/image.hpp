#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "buoybench/geometry.hpp"

namespace buoybench {

/// One image channel as a float array on [0,255], row-major indexed (y, x).
using Plane = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// 8-bit RGB image stored as three Eigen planes.
struct Image {
    std::array<Plane, 3> ch;  // r, g, b

    Image() = default;
    Image(int width, int height, std::uint8_t fill = 0) {
        for (auto& p : ch) p = Plane::Constant(height, width, float(fill));
    }

    int width() const { return int(ch[0].cols()); }
    int height() const { return int(ch[0].rows()); }
    ImageDims dims() const { return {width(), height()}; }

    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        ch[0](y, x) = r;
        ch[1](y, x) = g;
        ch[2](y, x) = b;
    }

    /// Quantize to 8 bits. Compositing runs on floats; call this before
    /// hashing or writing so results are bit-stable.
    void quantize();

    bool operator==(const Image& o) const;
};

/// Mean luminance (BT.601 weights) on [0,1].
double mean_luma(const Image& img);

/// 24-bit uncompressed BMP, bottom-up BGR rows.
void write_bmp(const Image& img, const std::string& path);
Image read_bmp(const std::string& path);

/// FNV-1a over quantized RGB bytes in scanline order.
std::uint64_t image_hash(const Image& img);

/// RGB [0,255] -> HSV with h in [0,360), s,v in [0,1]. Hue of gray is 0.
void rgb_to_hsv(float r, float g, float b, float& h, float& s, float& v);
void hsv_to_rgb(float h, float s, float v, float& r, float& g, float& b);

/// Nearest-neighbour resize.
Image resize(const Image& img, int width, int height);

/// Inverse-mapped warp by a 3x3 homogeneous transform (dst <- src via
/// transform^-1), bilinear sampling, out-of-source pixels take fill.
Image warp(const Image& img, const Eigen::Matrix3d& transform, int out_width,
           int out_height, std::uint8_t fill);

/// Axis-aligned rectangle outline, clipped to the image.
void draw_rect(Image& img, const BBoxAbs& box, std::array<std::uint8_t, 3> color,
               int thickness = 2);

/// Filled ellipse with simple top-lit shading.
void draw_shaded_ellipse(Image& img, double cx, double cy, double rx, double ry,
                         std::array<std::uint8_t, 3> color);

}  // namespace buoybench
