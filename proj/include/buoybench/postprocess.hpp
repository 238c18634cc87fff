#pragma once

#include <vector>

#include "buoybench/dataset.hpp"
#include "buoybench/geometry.hpp"

namespace buoybench {

struct PostprocessConfig {
    double conf_threshold = 0.001;
    double nms_iou_threshold = 0.65;
    std::size_t max_detections = 300;
};

/// Keeps detections with confidence >= threshold, order preserved.
std::vector<Detection> confidence_filter(const std::vector<Detection>& dets,
                                         const PostprocessConfig& cfg);

/// Greedy class-aware NMS. Sort by confidence descending (stable on ties),
/// keep the top box, drop same-class boxes with iou strictly above the
/// threshold, repeat; truncate to max_detections.
std::vector<Detection> nms(const std::vector<Detection>& dets,
                           const ImageDims& dims, const PostprocessConfig& cfg);

/// confidence_filter then nms.
std::vector<Detection> postprocess(const std::vector<Detection>& dets,
                                   const ImageDims& dims,
                                   const PostprocessConfig& cfg);

}  // namespace buoybench
