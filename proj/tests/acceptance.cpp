// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "buoybench/augment.hpp"
#include "buoybench/bench.hpp"
#include "buoybench/dataset.hpp"
#include "buoybench/evaluation.hpp"
#include "buoybench/geometry.hpp"
#include "buoybench/postprocess.hpp"
#include "buoybench/rng.hpp"
#include "buoybench/synthfarm.hpp"
#include "oracles.hpp"

using namespace buoybench;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& msg) { g_notes.push_back(msg); }

void check(bool ok, const std::string& what) {
    if (!ok) note("check failed: " + what);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void criterion(int id, const std::string& title, void (*fn)()) {
    g_notes.clear();
    bool threw = false;
    std::string err;
    try {
        fn();
    } catch (const std::exception& e) {
        threw = true;
        err = e.what();
    }
    bool pass = g_notes.empty() && !threw;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title
              << "\n";
    if (threw) std::cout << "       exception: " << err << "\n";
    for (const auto& n : g_notes) std::cout << "       " << n << "\n";
    if (!pass) ++g_failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- 1: F1 identity on published metric rows ----

void c1_f1_identity() {
    struct Row {
        double f1, p, r;
    };
    const Row rows[] = {
        // combined test set
        {0.579, 0.684, 0.502},
        {0.726, 0.823, 0.649},
        {0.785, 0.816, 0.756},
        {0.865, 0.890, 0.841},
        // per-dataset ablation
        {0.675, 0.791, 0.588},
        {0.667, 0.769, 0.589},
        {0.844, 0.875, 0.816},
        {0.843, 0.877, 0.812},
        {0.585, 0.560, 0.613},
        {0.574, 0.607, 0.545},
        {0.793, 0.801, 0.785},
        {0.804, 0.829, 0.780},
        {0.515, 0.574, 0.467},
        {0.522, 0.569, 0.483},
        {0.789, 0.798, 0.780},
        {0.795, 0.839, 0.755},
        // adverse-weather test set
        {0.545, 0.685, 0.453},
        {0.474, 0.543, 0.421},
        {0.772, 0.803, 0.744},
        {0.826, 0.836, 0.816},
    };
    for (const auto& r : rows) {
        double f1 = 2 * r.p * r.r / (r.p + r.r);
        std::ostringstream what;
        what << "F1(" << r.p << "," << r.r << ") = " << f1 << " vs " << r.f1;
        check(std::abs(f1 - r.f1) <= 0.001, what.str());
    }
}

// ---- 2: FPS arithmetic and feasibility verdicts ----

void c2_fps_arithmetic() {
    struct Row {
        const char* model;
        double ms, fps;
        bool feasible;
    };
    const Row rows[] = {{"tiny-640", 6.8, 147.1, true},
                        {"full-640", 24.5, 40.8, true},
                        {"tiny-1280", 16.1, 62.1, true},
                        {"full-1280", 75.4, 13.3, false}};
    std::vector<std::pair<std::string, BenchStats>> stats;
    for (const auto& r : rows) {
        auto s = stats_from_latencies({r.ms}, 15.0);
        check(std::abs(s.fps - r.fps) < 0.1,
              std::string(r.model) + " fps " + std::to_string(s.fps));
        check(s.feasible == r.feasible, std::string(r.model) + " verdict");
        stats.emplace_back(r.model, s);
    }
    auto report = feasibility_report(stats, 15.0);
    for (const auto& row : report)
        check(row.feasible == (row.model != "full-1280"),
              "report verdict for " + row.model);
}

// ---- 3: split sizes ----

void c3_split_sizes() {
    SplitSpec spec;  // 0.7 / 0.1 / 0.2
    struct Case {
        std::size_t n, train, val, test;
    };
    const Case cases[] = {{160, 112, 16, 32},
                          {181, 126, 18, 37},
                          {1041, 728, 104, 209},
                          // published row says 489 train for n=700; the
                          // floor rule gives 490 and is the accepted value.
                          {700, 490, 70, 140}};
    for (const auto& c : cases) {
        auto s = split_sizes(c.n, spec);
        std::ostringstream what;
        what << "n=" << c.n << " -> " << s.train << "/" << s.val << "/" << s.test;
        check(s.train == c.train && s.val == c.val && s.test == c.test, what.str());
    }
}

// ---- 4: evaluator vs brute-force reference ----

void c4_evaluator_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    const ImageDims dims{640, 480};
    Rng rng(2024);
    for (int scene = 0; scene < 200; ++scene) {
        std::vector<Annotation> gts;
        std::vector<Detection> dets;
        int ng = int(rng.below(7)), nd = int(rng.below(7));
        for (int k = 0; k < ng; ++k)
            gts.push_back({0,
                           {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85),
                            rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3)}});
        for (int k = 0; k < nd; ++k)
            dets.push_back({0,
                            {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85),
                             rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3)},
                            rng.uniform(0.01, 1.0)});

        for (double thr : {0.5, 0.75}) {
            auto recs = match(dets, gts, thr, dims, "s");
            auto ref = oracle::match_reference(dets, gts, thr, dims);
            for (const auto& r : recs)
                check(r.matched == ref[r.det_index], "TP/FP label mismatch");

            auto curve = pr_curve(recs, gts.size());
            std::vector<bool> flags;
            for (const auto& r : recs) flags.push_back(r.matched);
            std::stable_sort(recs.begin(), recs.end(),
                             [](const MatchRecord& a, const MatchRecord& b) {
                                 return a.confidence > b.confidence;
                             });
            flags.clear();
            for (const auto& r : recs) flags.push_back(r.matched);
            double ap = average_precision(curve);
            double ref_ap = oracle::ap_reference(flags, gts.size());
            if (gts.empty()) ref_ap = 0.0;
            check(std::abs(ap - ref_ap) < 1e-9,
                  "AP " + std::to_string(ap) + " vs " + std::to_string(ref_ap));
        }
    }
    check(seconds_since(t0) < 10.0, "runtime over 10 s");
}

// ---- 5: AP hand case ----

void c5_ap_hand_case() {
    std::vector<MatchRecord> recs(3);
    recs[0] = {0, "a", 0.9, true, 0, 1.0};
    recs[1] = {1, "a", 0.8, false, {}, 0};
    recs[2] = {2, "a", 0.7, true, 1, 1.0};
    double ap = average_precision(pr_curve(recs, 2));
    double expect = (51.0 + 50.0 * 2.0 / 3.0) / 101.0;
    check(std::abs(ap - expect) < 1e-6, "AP " + std::to_string(ap));
}

// ---- 6: NMS properties ----

void c6_nms_properties() {
    auto t0 = std::chrono::steady_clock::now();
    const ImageDims dims{640, 480};
    Rng rng(7);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<Detection> dets;
        int n = int(rng.below(13));
        for (int k = 0; k < n; ++k)
            dets.push_back({int(rng.below(2)),
                            {rng.uniform(0.15, 0.85), rng.uniform(0.15, 0.85),
                             rng.uniform(0.05, 0.3), rng.uniform(0.05, 0.3)},
                            rng.uniform(0.01, 1.0)});
        for (double thr : {0.3, 0.65, 1.0}) {
            PostprocessConfig cfg;
            cfg.conf_threshold = 0.0;
            cfg.nms_iou_threshold = thr;
            auto out = nms(dets, dims, cfg);
            auto ref = oracle::nms_reference(dets, dims, thr, cfg.max_detections);
            bool same = out.size() == ref.size();
            for (std::size_t i = 0; same && i < out.size(); ++i)
                same = out[i].box == ref[i].box &&
                       out[i].confidence == ref[i].confidence &&
                       out[i].class_id == ref[i].class_id;
            check(same, "output differs from reference");

            auto twice = nms(out, dims, cfg);
            check(twice.size() == out.size(), "not idempotent");

            for (std::size_t i = 0; i < out.size(); ++i)
                for (std::size_t j = i + 1; j < out.size(); ++j) {
                    if (out[i].class_id != out[j].class_id) continue;
                    double v = iou(to_abs(out[i].box, dims), to_abs(out[j].box, dims));
                    check(v <= thr + 1e-12, "surviving pair above threshold");
                }
        }
    }
    check(seconds_since(t0) < 5.0, "runtime over 5 s");
}

// ---- 7: IoU vs grid oracle ----

void c7_iou_oracle() {
    double v = iou({0, 0, 2, 2}, {1, 1, 3, 3});
    check(std::abs(v - 1.0 / 7.0) < 1e-9, "1/7 case: " + std::to_string(v));

    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
        BBoxAbs a{rng.uniform(0, 50), rng.uniform(0, 50), 0, 0};
        BBoxAbs b{rng.uniform(0, 50), rng.uniform(0, 50), 0, 0};
        a.x2 = a.x1 + rng.uniform(0.5, 40);
        a.y2 = a.y1 + rng.uniform(0.5, 40);
        b.x2 = b.x1 + rng.uniform(0.5, 40);
        b.y2 = b.y1 + rng.uniform(0.5, 40);
        double analytic = iou(a, b);
        double grid = oracle::iou_grid(a, b, 3000);
        check(std::abs(analytic - grid) < 1e-3, "grid mismatch " +
                                                    std::to_string(analytic) +
                                                    " vs " + std::to_string(grid));
    }
}

// ---- 8: augmentation geometry fidelity ----

Sample scene_to_sample(std::uint64_t seed) {
    SceneConfig cfg;
    cfg.dims = {320, 240};
    cfg.n_lines = 2;
    cfg.buoys_per_line = 4;
    cfg.rng_seed = seed;
    auto scene = generate_scene(cfg);
    Sample s;
    s.image = std::move(scene.image);
    s.annotations = scene.annotations;
    for (std::size_t i = 0; i < scene.annotations.size(); ++i) {
        const auto& b = scene.buoys[scene.annotation_buoy[i]];
        BBoxAbs box = to_abs(scene.annotations[i].box, cfg.dims);
        s.anchors.emplace_back(std::clamp(b.cx, box.x1, box.x2),
                               std::clamp(b.cy, box.y1, box.y2));
    }
    return s;
}

void c8_augment_fidelity() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Sample> pool;
    for (int i = 0; i < 100; ++i) pool.push_back(scene_to_sample(1000 + i));
    ImageDims target = pool.front().dims();

    AugmentConfig cfg;  // hsv/translate/scale/flip/mosaic/mixup defaults
    cfg.rng_seed = 4242;
    for (std::size_t i = 0; i < 100; ++i) {
        Sample out = augment_sample(pool, i, cfg, target);
        check(out.anchors.size() == out.annotations.size(), "anchor count");
        for (std::size_t k = 0; k < out.annotations.size(); ++k) {
            const auto& box = out.annotations[k].box;
            check(box.valid(), "degenerate box");
            BBoxAbs abs_box = to_abs(box, out.dims());
            check(abs_box.x1 >= -1e-6 && abs_box.y1 >= -1e-6 &&
                      abs_box.x2 <= out.dims().width + 1e-6 &&
                      abs_box.y2 <= out.dims().height + 1e-6,
                  "out-of-bounds box");
            if (k < out.anchors.size()) {
                const auto& a = out.anchors[k];
                check(a.x() >= abs_box.x1 - 2.0 && a.x() <= abs_box.x2 + 2.0 &&
                          a.y() >= abs_box.y1 - 2.0 && a.y() <= abs_box.y2 + 2.0,
                      "anchor outside its box");
            }
        }
    }

    AugmentConfig ident = AugmentConfig::identity();
    for (std::size_t i = 0; i < 5; ++i) {
        Sample out = augment_sample(pool, i, ident, target);
        check(out.image == pool[i].image, "identity config changed the image");
        check(out.annotations.size() == pool[i].annotations.size(),
              "identity config changed the labels");
    }
    check(seconds_since(t0) < 60.0, "runtime over 60 s");
}

// ---- 9: end-to-end CLI determinism ----

int run_cli(const std::string& args) {
    std::string cmd = std::string(BUOYBENCH_CLI_PATH) + " " + args + " >/dev/null";
    return std::system(cmd.c_str());
}

void e2e_chain(const fs::path& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string d = dir.string();
    check(run_cli("--seed 5 synth --out " + d + "/ds --n 10 --width 320 "
                  "--height 240 --weather choppy --name e2e") == 0,
          "synth failed");
    check(run_cli("--seed 5 split --manifest " + d + "/ds/manifest.txt --out " +
                  d + "/splits") == 0,
          "split failed");
    check(run_cli("--seed 5 perturb --manifest " + d + "/splits/test.txt --out " +
                  d + "/dets --drop 0.2 --jitter 1.5 --spurious 1.0") == 0,
          "perturb failed");
    check(run_cli("evaluate --gt " + d + "/splits/test.txt --dets " + d +
                  "/dets --out " + d + "/eval --model perturbed") == 0,
          "evaluate failed");
    check(run_cli("report --eval " + d + "/eval/perturbed.eval.txt --out " + d +
                  "/report") == 0,
          "report failed");
}

void c9_e2e_determinism() {
    fs::path base = fs::temp_directory_path();
    fs::path r1 = base / "bb_accept_e2e_1", r2 = base / "bb_accept_e2e_2";
    e2e_chain(r1);
    e2e_chain(r2);
    const char* files[] = {"eval/perturbed.eval.txt", "eval/perturbed.csv",
                           "report/tables/performance.csv",
                           "report/tables/performance.txt",
                           "report/figures/metrics.svg"};
    for (const char* f : files) {
        std::string a = slurp(r1 / f), b = slurp(r2 / f);
        check(!a.empty() && a.rfind("<missing", 0) != 0, std::string(f) + " missing");
        check(a == b, std::string(f) + " differs between runs");
    }
    fs::remove_all(r1);
    fs::remove_all(r2);
}

// ---- 10: degradation ladder is monotone in mAP ----

void c10_weather_ladder() {
    struct Level {
        Weather weather;
        ErrorModel em;
    };
    std::vector<Level> ladder(4);
    const Weather ws[] = {Weather::clear, Weather::choppy, Weather::foggy,
                          Weather::adverse};
    const double drop[] = {0.0, 0.10, 0.25, 0.45};
    const double jitter[] = {0.0, 1.0, 2.5, 5.0};
    const double spurious[] = {0.0, 0.5, 1.5, 3.0};
    for (int i = 0; i < 4; ++i) {
        ladder[std::size_t(i)].weather = ws[i];
        ladder[std::size_t(i)].em.drop_rate = drop[i];
        ladder[std::size_t(i)].em.jitter_sigma = jitter[i];
        ladder[std::size_t(i)].em.spurious_rate = spurious[i];
    }

    std::vector<double> maps;
    for (std::size_t lvl = 0; lvl < ladder.size(); ++lvl) {
        std::vector<ImageSample> samples;
        Rng rng(Rng(77).derive(lvl).next_u64());
        for (int img = 0; img < 16; ++img) {
            SceneConfig cfg;
            cfg.dims = {320, 240};
            cfg.n_lines = 2;
            cfg.buoys_per_line = 5;
            cfg.weather = ladder[lvl].weather;
            cfg.rng_seed = 500 + std::uint64_t(img);  // same scenes per level
            auto scene = generate_scene(cfg);
            auto r = perturb_predictions(scene.annotations, cfg.dims,
                                         ladder[lvl].em, rng);
            ImageSample s;
            s.image_id = "img" + std::to_string(img);
            s.dims = cfg.dims;
            s.gts = scene.annotations;
            s.dets = r.detections;
            samples.push_back(std::move(s));
        }
        maps.push_back(evaluate(samples).map);
    }
    for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
        std::ostringstream what;
        what << "mAP rose from level " << i << " (" << maps[i] << ") to "
             << i + 1 << " (" << maps[i + 1] << ")";
        check(maps[i] >= maps[i + 1] - 1e-12, what.str());
    }
    check(maps.front() > maps.back(), "no degradation across the ladder");
}

}  // namespace

int main() {
    criterion(1, "F1 identity on published metric rows", c1_f1_identity);
    criterion(2, "FPS arithmetic and 15 FPS feasibility verdicts",
              c2_fps_arithmetic);
    criterion(3, "deterministic split sizes", c3_split_sizes);
    criterion(4, "evaluator equals brute-force reference on 200 scenes",
              c4_evaluator_oracle);
    criterion(5, "AP hand case", c5_ap_hand_case);
    criterion(6, "NMS reference equality, idempotence, pairwise bound",
              c6_nms_properties);
    criterion(7, "analytic IoU vs grid oracle", c7_iou_oracle);
    criterion(8, "augmentation geometry fidelity", c8_augment_fidelity);
    criterion(9, "end-to-end CLI chain is byte-deterministic",
              c9_e2e_determinism);
    criterion(10, "error-model ladder degrades mAP monotonically",
              c10_weather_ladder);
    if (g_failures) {
        std::cout << g_failures << " criteria failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
