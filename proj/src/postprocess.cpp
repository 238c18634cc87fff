#include "buoybench/postprocess.hpp"

#include <algorithm>
#include <numeric>

namespace buoybench {

std::vector<Detection> confidence_filter(const std::vector<Detection>& dets,
                                         const PostprocessConfig& cfg) {
    std::vector<Detection> out;
    out.reserve(dets.size());
    for (const auto& d : dets)
        if (d.confidence >= cfg.conf_threshold) out.push_back(d);
    return out;
}

std::vector<Detection> nms(const std::vector<Detection>& dets,
                           const ImageDims& dims, const PostprocessConfig& cfg) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].confidence > dets[b].confidence;
    });

    std::vector<BBoxAbs> abs_boxes(dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i)
        abs_boxes[i] = to_abs(dets[i].box, dims);

    std::vector<Detection> kept;
    std::vector<std::size_t> kept_idx;
    for (std::size_t i : order) {
        bool suppressed = false;
        for (std::size_t k : kept_idx) {
            if (dets[k].class_id == dets[i].class_id &&
                iou(abs_boxes[k], abs_boxes[i]) > cfg.nms_iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            kept_idx.push_back(i);
            kept.push_back(dets[i]);
            if (kept.size() >= cfg.max_detections) break;
        }
    }
    return kept;
}

std::vector<Detection> postprocess(const std::vector<Detection>& dets,
                                   const ImageDims& dims,
                                   const PostprocessConfig& cfg) {
    return nms(confidence_filter(dets, cfg), dims, cfg);
}

}  // namespace buoybench
