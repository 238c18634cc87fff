#pragma once

#include <algorithm>
#include <stdexcept>

namespace buoybench {

struct ImageDims {
    int width = 0;
    int height = 0;

    bool valid() const { return width >= 1 && height >= 1; }
    bool operator==(const ImageDims&) const = default;
};

/// Normalized center-size box: all fields are fractions of image size.
/// Storage and interchange convention.
struct BBoxNorm {
    double cx = 0, cy = 0, w = 0, h = 0;

    bool valid() const {
        return cx >= 0 && cx <= 1 && cy >= 0 && cy <= 1 && w > 0 && w <= 1 &&
               h > 0 && h <= 1;
    }
    bool operator==(const BBoxNorm&) const = default;
};

/// Absolute corner box in continuous pixel coordinates. Compute convention.
struct BBoxAbs {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }
    bool valid() const { return x1 <= x2 && y1 <= y2; }
    bool operator==(const BBoxAbs&) const = default;
};

inline BBoxAbs to_abs(const BBoxNorm& b, const ImageDims& dims) {
    if (!dims.valid()) throw std::invalid_argument("to_abs: degenerate image dims");
    return {(b.cx - b.w / 2) * dims.width, (b.cy - b.h / 2) * dims.height,
            (b.cx + b.w / 2) * dims.width, (b.cy + b.h / 2) * dims.height};
}

inline BBoxNorm to_norm(const BBoxAbs& b, const ImageDims& dims) {
    if (!dims.valid()) throw std::invalid_argument("to_norm: degenerate image dims");
    return {(b.x1 + b.x2) / 2 / dims.width, (b.y1 + b.y2) / 2 / dims.height,
            (b.x2 - b.x1) / dims.width, (b.y2 - b.y1) / dims.height};
}

/// Intersection over union. Zero-area against zero-area is 0 by definition,
/// so the function is total.
inline double iou(const BBoxAbs& a, const BBoxAbs& b) {
    double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    double inter = ix * iy;
    double uni = a.area() + b.area() - inter;
    return uni > 0 ? inter / uni : 0.0;
}

inline BBoxAbs clip(const BBoxAbs& b, const ImageDims& dims) {
    BBoxAbs r{std::clamp(b.x1, 0.0, double(dims.width)),
              std::clamp(b.y1, 0.0, double(dims.height)),
              std::clamp(b.x2, 0.0, double(dims.width)),
              std::clamp(b.y2, 0.0, double(dims.height))};
    return r;
}

}  // namespace buoybench
