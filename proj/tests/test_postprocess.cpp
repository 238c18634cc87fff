#include <doctest.h>

#include "buoybench/postprocess.hpp"
#include "buoybench/rng.hpp"
#include "oracles.hpp"

using namespace buoybench;

namespace {
Detection det(double cx, double cy, double w, double h, double conf) {
    return {0, {cx, cy, w, h}, conf};
}
const ImageDims kDims{100, 100};
}  // namespace

TEST_CASE("confidence_filter") {
    PostprocessConfig cfg;
    std::vector<Detection> dets = {det(0.5, 0.5, 0.1, 0.1, 0.0005),
                                   det(0.5, 0.5, 0.1, 0.1, 0.5)};
    auto kept = confidence_filter(dets, cfg);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].confidence == doctest::Approx(0.5));

    cfg.conf_threshold = 0;
    CHECK(confidence_filter(dets, cfg).size() == 2);
    CHECK(confidence_filter({}, cfg).empty());
}

TEST_CASE("nms worked example") {
    // b1=(0,0,10,10) 0.9, b2=(0,0,10,12) 0.8 (iou 10/12 > 0.65), b3 disjoint.
    std::vector<Detection> dets = {det(0.05, 0.05, 0.1, 0.1, 0.9),
                                   det(0.05, 0.06, 0.1, 0.12, 0.8),
                                   det(0.25, 0.25, 0.1, 0.1, 0.5)};
    auto kept = nms(dets, kDims, PostprocessConfig{});
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].confidence == doctest::Approx(0.9));
    CHECK(kept[1].confidence == doctest::Approx(0.5));
}

TEST_CASE("nms threshold 1.0 keeps everything") {
    std::vector<Detection> dets = {det(0.5, 0.5, 0.2, 0.2, 0.9),
                                   det(0.5, 0.5, 0.2, 0.2, 0.8)};
    PostprocessConfig cfg;
    cfg.nms_iou_threshold = 1.0;
    CHECK(nms(dets, kDims, cfg).size() == 2);
}

TEST_CASE("nms single detection unchanged") {
    std::vector<Detection> dets = {det(0.5, 0.5, 0.2, 0.2, 0.4)};
    auto kept = nms(dets, kDims, PostprocessConfig{});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].box == dets[0].box);
}

TEST_CASE("nms respects max_detections") {
    std::vector<Detection> dets;
    for (int i = 0; i < 10; ++i)
        dets.push_back(det(0.05 + 0.09 * i, 0.5, 0.05, 0.05, 0.9 - 0.01 * i));
    PostprocessConfig cfg;
    cfg.max_detections = 4;
    CHECK(nms(dets, kDims, cfg).size() == 4);
}

TEST_CASE("nms properties against the reference") {
    Rng rng(99);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<Detection> dets;
        int n = int(rng.below(13));
        for (int i = 0; i < n; ++i) {
            double w = rng.uniform(0.05, 0.4), h = rng.uniform(0.05, 0.4);
            dets.push_back(det(rng.uniform(w / 2, 1 - w / 2),
                               rng.uniform(h / 2, 1 - h / 2), w, h,
                               rng.uniform(0, 1)));
        }
        for (double thr : {0.3, 0.65, 1.0}) {
            PostprocessConfig cfg;
            cfg.nms_iou_threshold = thr;
            auto kept = nms(dets, kDims, cfg);
            auto ref = oracle::nms_reference(dets, kDims, thr, cfg.max_detections);

            REQUIRE(kept.size() == ref.size());
            for (std::size_t i = 0; i < kept.size(); ++i) {
                CHECK(kept[i].box == ref[i].box);
                CHECK(kept[i].confidence == ref[i].confidence);
            }
            // Idempotence.
            auto twice = nms(kept, kDims, cfg);
            REQUIRE(twice.size() == kept.size());
            for (std::size_t i = 0; i < kept.size(); ++i)
                CHECK(twice[i].box == kept[i].box);
            // Confidences non-increasing; no surviving pair above threshold.
            for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
                CHECK(kept[i].confidence >= kept[i + 1].confidence);
                for (std::size_t j = i + 1; j < kept.size(); ++j)
                    CHECK(iou(to_abs(kept[i].box, kDims),
                              to_abs(kept[j].box, kDims)) <= thr + 1e-12);
            }
        }
    }
}
