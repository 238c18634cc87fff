#include "buoybench/evaluation.hpp"

#include <algorithm>
#include <numeric>

namespace buoybench {

std::vector<MatchRecord> match(const std::vector<Detection>& dets,
                               const std::vector<Annotation>& gts,
                               double iou_thr, const ImageDims& dims,
                               const std::string& image_id) {
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].confidence > dets[b].confidence;
    });

    std::vector<BBoxAbs> gt_abs(gts.size());
    for (std::size_t i = 0; i < gts.size(); ++i) gt_abs[i] = to_abs(gts[i].box, dims);

    std::vector<bool> gt_taken(gts.size(), false);
    std::vector<MatchRecord> records;
    records.reserve(dets.size());
    for (std::size_t i : order) {
        BBoxAbs det_abs = to_abs(dets[i].box, dims);
        double best_iou = 0;
        std::optional<std::size_t> best_gt;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (gt_taken[g] || gts[g].class_id != dets[i].class_id) continue;
            double v = iou(det_abs, gt_abs[g]);
            if (v > best_iou) {
                best_iou = v;
                best_gt = g;
            }
        }
        MatchRecord r;
        r.det_index = i;
        r.image_id = image_id;
        r.confidence = dets[i].confidence;
        if (best_gt && best_iou >= iou_thr) {
            r.matched = true;
            r.gt_index = best_gt;
            r.iou_at_match = best_iou;
            gt_taken[*best_gt] = true;
        }
        records.push_back(r);
    }
    return records;
}

PRCurve pr_curve(std::vector<MatchRecord> records, std::size_t total_gt) {
    std::sort(records.begin(), records.end(),
              [](const MatchRecord& a, const MatchRecord& b) {
                  if (a.confidence != b.confidence) return a.confidence > b.confidence;
                  if (a.image_id != b.image_id) return a.image_id < b.image_id;
                  return a.det_index < b.det_index;
              });
    PRCurve curve;
    curve.total_gt = total_gt;
    if (total_gt == 0) {
        curve.degenerate_no_gt = !records.empty();
        return curve;
    }
    std::size_t tp = 0, fp = 0;
    curve.points.reserve(records.size());
    for (const auto& r : records) {
        r.matched ? ++tp : ++fp;
        curve.points.push_back({r.confidence,
                                double(tp) / double(tp + fp),
                                double(tp) / double(total_gt)});
    }
    return curve;
}

double average_precision(const PRCurve& curve) {
    if (curve.points.empty()) return 0.0;
    double sum = 0;
    for (int i = 0; i <= 100; ++i) {
        double r = i / 100.0;
        double p = 0;
        for (const auto& pt : curve.points)
            if (pt.recall >= r - 1e-12) p = std::max(p, pt.precision);
        sum += p;
    }
    return sum / 101.0;
}

EvalResult evaluate(const std::vector<ImageSample>& images) {
    std::size_t total_gt = 0;
    for (const auto& im : images) total_gt += im.gts.size();

    EvalResult res;
    PRCurve curve50;
    for (std::size_t t = 0; t < kIouThresholds.size(); ++t) {
        std::vector<MatchRecord> records;
        for (const auto& im : images) {
            auto r = match(im.dets, im.gts, kIouThresholds[t], im.dims, im.image_id);
            records.insert(records.end(), r.begin(), r.end());
        }
        PRCurve curve = pr_curve(std::move(records), total_gt);
        res.ap_per_threshold[t] = average_precision(curve);
        if (t == 0) curve50 = std::move(curve);
    }
    res.map = std::accumulate(res.ap_per_threshold.begin(),
                              res.ap_per_threshold.end(), 0.0) /
              double(kIouThresholds.size());
    res.map50 = res.ap_per_threshold[0];
    for (std::size_t t = 1; t < kIouThresholds.size(); ++t)
        if (res.ap_per_threshold[t] > res.ap_per_threshold[t - 1] + 1e-12)
            res.map_monotonicity_violated = true;

    // Operating point: best F1 along the IoU-0.5 curve, highest-confidence
    // point on ties.
    double best_f1 = -1;
    for (const auto& pt : curve50.points) {
        double denom = pt.precision + pt.recall;
        double f1 = denom > 0 ? 2 * pt.precision * pt.recall / denom : 0;
        if (f1 > best_f1) {
            best_f1 = f1;
            res.precision = pt.precision;
            res.recall = pt.recall;
            res.f1 = f1;
            res.operating_confidence = pt.confidence;
        }
    }
    if (best_f1 < 0) res.f1 = 0;
    return res;
}

CrossEvalMatrix cross_evaluate(
    const std::map<std::string,
                   std::map<std::string, std::vector<ImageSample>>>& runs) {
    CrossEvalMatrix out;
    for (const auto& [model, per_set] : runs)
        for (const auto& [set_name, images] : per_set)
            out[model][set_name] = evaluate(images);
    return out;
}

}  // namespace buoybench
