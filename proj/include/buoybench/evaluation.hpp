#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "buoybench/dataset.hpp"
#include "buoybench/geometry.hpp"

namespace buoybench {

/// TP/FP bookkeeping for one detection at one IoU threshold.
struct MatchRecord {
    std::size_t det_index = 0;
    std::string image_id;
    double confidence = 0;
    bool matched = false;
    std::optional<std::size_t> gt_index;
    double iou_at_match = 0;
};

struct PRPoint {
    double confidence;
    double precision;
    double recall;
};

struct PRCurve {
    std::vector<PRPoint> points;  // confidence descending
    std::size_t total_gt = 0;
    bool degenerate_no_gt = false;  // detections present but zero GT
};

constexpr std::array<double, 10> kIouThresholds = {0.50, 0.55, 0.60, 0.65, 0.70,
                                                  0.75, 0.80, 0.85, 0.90, 0.95};

struct EvalResult {
    std::array<double, 10> ap_per_threshold{};
    double map = 0;       // mean over the 10 thresholds
    double map50 = 0;     // AP at IoU 0.5
    double precision = 0; // at operating point
    double recall = 0;
    double f1 = 0;
    double operating_confidence = 0;
    bool map_monotonicity_violated = false;  // AP increased with IoU threshold
};

/// One image: greedy by confidence descending; a detection takes the
/// unmatched same-class GT with the highest IoU when that IoU >= iou_thr.
std::vector<MatchRecord> match(const std::vector<Detection>& dets,
                               const std::vector<Annotation>& gts,
                               double iou_thr, const ImageDims& dims,
                               const std::string& image_id = "");

/// Pooled over the test set: sort by confidence descending (ties broken by
/// image id then detection index), cumulate TP/FP.
PRCurve pr_curve(std::vector<MatchRecord> records, std::size_t total_gt);

/// 101-point interpolated AP over recall grid 0.00, 0.01, ..., 1.00.
double average_precision(const PRCurve& curve);

struct ImageSample {
    std::string image_id;
    ImageDims dims;
    std::vector<Annotation> gts;
    std::vector<Detection> dets;  // already postprocessed
};

EvalResult evaluate(const std::vector<ImageSample>& images);

/// (model, test set) -> EvalResult; absent prediction sets stay absent.
using CrossEvalMatrix =
    std::map<std::string, std::map<std::string, std::optional<EvalResult>>>;

CrossEvalMatrix cross_evaluate(
    const std::map<std::string,
                   std::map<std::string, std::vector<ImageSample>>>& runs);

}  // namespace buoybench
