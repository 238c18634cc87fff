#include <CLI11.hpp>
#include <array>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "buoybench/augment.hpp"
#include "buoybench/bench.hpp"
#include "buoybench/dataset.hpp"
#include "buoybench/evaluation.hpp"
#include "buoybench/image.hpp"
#include "buoybench/postprocess.hpp"
#include "buoybench/report.hpp"
#include "buoybench/synthfarm.hpp"

#ifdef __unix__
#include <sys/wait.h>
#include <unistd.h>
#endif

namespace fs = std::filesystem;
using namespace buoybench;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string default_out_dir() {
    const char* env = std::getenv("BUOYBENCH_OUT");
    return env ? env : "out";
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    int nw = int(std::min<std::size_t>(std::size_t(jobs), n));
    std::vector<std::exception_ptr> errors{std::size_t(nw)};
    for (int w = 0; w < nw; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n;
                     i = next.fetch_add(1))
                    fn(i);
            } catch (...) {
                errors[std::size_t(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string stem_of(const std::string& image_path) {
    return fs::path(image_path).stem().string();
}

// ---- synth ----

int cmd_synth(const SceneConfig& cfg, int n, std::uint64_t seed,
              const std::string& out, const std::string& name) {
    generate_dataset(cfg, n, seed, out, name);
    std::cout << "wrote " << n << " images under " << out << "\n";
    return 0;
}

// ---- split ----

int cmd_split(const std::string& manifest_path, const std::string& out,
              const std::string& ratios_str, std::uint64_t seed) {
    SplitSpec spec;
    spec.rng_seed = seed;
    {
        std::istringstream iss(ratios_str);
        std::string tok;
        std::vector<double> r;
        while (std::getline(iss, tok, ',')) r.push_back(std::stod(tok));
        if (r.size() != 3) throw DataError("--ratios needs 3 comma-separated values");
        spec.train = r[0];
        spec.val = r[1];
        spec.test = r[2];
    }
    DatasetManifest m = load_manifest(manifest_path);
    DatasetManifest split = split_dataset(m, spec);
    fs::create_directories(out);
    save_manifest(split, (fs::path(out) / "all.txt").string());
    for (Split s : {Split::train, Split::val, Split::test}) {
        DatasetManifest sub = split;
        sub.name = split.name + "_" + to_string(s);
        sub.entries.clear();
        for (const auto& e : split.entries)
            if (e.split == s) sub.entries.push_back(e);
        save_manifest(sub, (fs::path(out) / (to_string(s) + ".txt")).string());
    }
    auto sizes = split_sizes(m.entries.size(), spec);
    std::cout << "split " << m.entries.size() << " -> " << sizes.train << "/"
              << sizes.val << "/" << sizes.test << "\n";
    return 0;
}

// ---- perturb ----

int cmd_perturb(const std::string& manifest_path, const std::string& out,
                const ErrorModel& em, std::uint64_t seed) {
    DatasetManifest m = load_manifest(manifest_path);
    fs::create_directories(out);
    Rng base(seed);
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const auto& e = m.entries[i];
        Rng rng = base.derive(i);
        auto res = perturb_predictions(e.annotations, e.dims, em, rng);
        write_file_atomic((fs::path(out) / (stem_of(e.image_path) + ".txt")).string(),
                          serialize_detections(res.detections));
    }
    std::cout << "wrote detections for " << m.entries.size() << " images\n";
    return 0;
}

// ---- evaluate ----

std::vector<ImageSample> load_eval_samples(const DatasetManifest& m,
                                           const std::string& manifest_path,
                                           const std::string& dets_dir,
                                           const PostprocessConfig& pp) {
    // Every detection file must correspond to a manifest image.
    std::set<std::string> known;
    for (const auto& e : m.entries) known.insert(stem_of(e.image_path));
    std::vector<std::string> unknown;
    for (const auto& de : fs::directory_iterator(dets_dir)) {
        if (de.path().extension() != ".txt") continue;
        if (!known.count(de.path().stem().string()))
            unknown.push_back(de.path().stem().string());
    }
    if (!unknown.empty()) {
        std::string msg = "detections reference unknown images:";
        for (const auto& u : unknown) msg += " " + u;
        throw DataError(msg);
    }

    std::vector<ImageSample> samples;
    for (const auto& e : m.entries) {
        ImageSample s;
        s.image_id = e.image_path;
        s.dims = e.dims;
        s.gts = e.annotations;
        fs::path det = fs::path(dets_dir) / (stem_of(e.image_path) + ".txt");
        if (fs::exists(det)) {
            auto dets = parse_detections(read_file(det.string()));
            s.dets = postprocess(dets, e.dims, pp);
        }
        samples.push_back(std::move(s));
    }
    (void)manifest_path;
    return samples;
}

int cmd_evaluate(const std::string& gt_path, const std::string& dets_dir,
                 const PostprocessConfig& pp, const std::string& out,
                 const std::string& model, const std::string& split_filter) {
    DatasetManifest m = load_manifest(gt_path);
    if (split_filter != "all") {
        Split want = split_from_string(split_filter);
        std::erase_if(m.entries,
                      [&](const ManifestEntry& e) { return e.split != want; });
    }
    if (m.entries.empty()) throw DataError("no entries to evaluate");
    auto samples = load_eval_samples(m, gt_path, dets_dir, pp);
    EvalResult r = evaluate(samples);

    write_file_atomic((fs::path(out) / (model + ".eval.txt")).string(),
                      serialize_eval_result(model, r));
    std::string csv = "Model,Test set,F1,Precision,Recall,mAP,mAP@0.5\n";
    csv += model + "," + m.name + "," + fmt_metric(r.f1) + "," +
           fmt_metric(r.precision) + "," + fmt_metric(r.recall) + "," +
           fmt_metric(r.map) + "," + fmt_metric(r.map50) + "\n";
    write_file_atomic((fs::path(out) / (model + ".csv")).string(), csv);
    std::cout << model << ": mAP " << fmt_metric(r.map) << " mAP@0.5 "
              << fmt_metric(r.map50) << " F1 " << fmt_metric(r.f1) << "\n";
    if (r.map_monotonicity_violated)
        std::cout << "note: AP not monotone in IoU threshold for this run\n";
    return 0;
}

// ---- augment ----

AugmentConfig load_augment_config(const std::string& path) {
    AugmentConfig cfg;
    std::istringstream iss(read_file(path));
    std::string key;
    double val;
    while (iss >> key >> val) {
        if (key == "hsv_h") cfg.hsv_h = val;
        else if (key == "hsv_s") cfg.hsv_s = val;
        else if (key == "hsv_v") cfg.hsv_v = val;
        else if (key == "degrees") cfg.degrees = val;
        else if (key == "translate") cfg.translate = val;
        else if (key == "scale") cfg.scale = val;
        else if (key == "shear") cfg.shear = val;
        else if (key == "perspective") cfg.perspective = val;
        else if (key == "flip_ud_prob") cfg.flip_ud_prob = val;
        else if (key == "flip_lr_prob") cfg.flip_lr_prob = val;
        else if (key == "mosaic_prob") cfg.mosaic_prob = val;
        else if (key == "mixup_prob") cfg.mixup_prob = val;
        else throw DataError("unknown augment config key: " + key);
    }
    return cfg;
}

int cmd_augment(const std::string& manifest_path, const std::string& out,
                AugmentConfig cfg, int count, int jobs) {
    DatasetManifest m = load_manifest(manifest_path);
    if (m.entries.empty()) throw DataError("empty manifest");
    fs::path base = fs::path(manifest_path).parent_path();

    std::vector<Sample> pool(m.entries.size());
    parallel_for(m.entries.size(), jobs, [&](std::size_t i) {
        pool[i].image = read_bmp((base / m.entries[i].image_path).string());
        pool[i].annotations = m.entries[i].annotations;
    });

    std::size_t n = count > 0 ? std::size_t(count) : pool.size();
    ImageDims target = pool.front().dims();
    fs::create_directories(fs::path(out) / "images");
    fs::create_directories(fs::path(out) / "labels");

    std::vector<AppliedOps> ops(n);
    DatasetManifest outm;
    outm.name = m.name + "_aug";
    outm.source = m.source;
    outm.entries.resize(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        Sample s = augment_sample(pool, i, cfg, target, &ops[i]);
        char stem[32];
        std::snprintf(stem, sizeof(stem), "aug_%05zu", i);
        fs::path img_rel = fs::path("images") / (std::string(stem) + ".bmp");
        fs::path lbl_rel = fs::path("labels") / (std::string(stem) + ".txt");
        write_bmp(s.image, (fs::path(out) / img_rel).string());
        write_file_atomic((fs::path(out) / lbl_rel).string(),
                          serialize_labels(s.annotations));
        ManifestEntry e;
        e.image_path = img_rel.generic_string();
        e.dims = s.dims();
        e.label_path = lbl_rel.generic_string();
        e.annotations = s.annotations;
        outm.entries[i] = std::move(e);
    });
    save_manifest(outm, (fs::path(out) / "manifest.txt").string());

    std::string prov = "seed " + std::to_string(cfg.rng_seed) + "\n";
    for (std::size_t i = 0; i < n; ++i) {
        prov += "sample " + std::to_string(i) + " ops:";
        if (ops[i].mosaic) prov += " mosaic";
        if (ops[i].mixup) prov += " mixup";
        prov += " affine hsv";
        if (ops[i].flip_ud) prov += " flip_ud";
        if (ops[i].flip_lr) prov += " flip_lr";
        prov += "\n";
    }
    write_file_atomic((fs::path(out) / "provenance.txt").string(), prov);
    std::cout << "wrote " << n << " augmented samples under " << out << "\n";
    return 0;
}

// ---- bench ----

std::string substitute(std::string tpl, const std::string& image,
                       const std::string& outfile) {
    auto replace_all = [](std::string& s, const std::string& from,
                          const std::string& to) {
        for (std::size_t p = s.find(from); p != std::string::npos;
             p = s.find(from, p + to.size()))
            s.replace(p, from.size(), to);
    };
    replace_all(tpl, "{image}", image);
    replace_all(tpl, "{out}", outfile);
    return tpl;
}

#ifdef __unix__
/// Persistent external target: one child process, one request line
/// `<image>\t<out>` per call, one `ok` line back per completed call.
class PersistentTarget {
public:
    explicit PersistentTarget(const std::string& command) {
        int to_child[2], from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0)
            throw std::runtime_error("pipe failed");
        pid_ = fork();
        if (pid_ < 0) throw std::runtime_error("fork failed");
        if (pid_ == 0) {
            dup2(to_child[0], 0);
            dup2(from_child[1], 1);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_ = fdopen(from_child[0], "r");
    }

    ~PersistentTarget() {
        if (in_fd_ >= 0) close(in_fd_);
        if (out_) fclose(out_);
        if (pid_ > 0) waitpid(pid_, nullptr, 0);
    }

    bool call(const std::string& image, const std::string& outfile) {
        std::string req = image + "\t" + outfile + "\n";
        if (write(in_fd_, req.data(), req.size()) != ssize_t(req.size()))
            return false;
        char buf[256];
        if (!fgets(buf, sizeof(buf), out_)) return false;
        return std::string(buf).rfind("ok", 0) == 0;
    }

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    FILE* out_ = nullptr;
};
#endif

int cmd_bench(const std::string& manifest_path, const std::string& command,
              BenchConfig cfg, bool persistent, const std::string& out_csv,
              const std::string& model) {
    DatasetManifest m = load_manifest(manifest_path);
    if (m.entries.empty()) throw DataError("empty manifest");
    fs::path base = fs::path(manifest_path).parent_path();
    fs::path det_tmp = fs::temp_directory_path() / "buoybench_bench_det.txt";

    std::size_t idx = 0;
    auto next_image = [&]() {
        const auto& e = m.entries[idx++ % m.entries.size()];
        return (base / e.image_path).string();
    };

    BenchStats stats;
#ifdef __unix__
    if (persistent) {
        PersistentTarget target(command);
        stats = run_bench(
            [&] { return target.call(next_image(), det_tmp.string()); }, cfg);
    } else
#endif
    {
        stats = run_bench(
            [&] {
                std::string c = substitute(command, next_image(), det_tmp.string());
                return std::system(c.c_str()) == 0;
            },
            cfg);
    }
    if (!stats.valid) throw DataError("bench target failed mid-run");

    auto rows = feasibility_report({{model, stats}}, cfg.realtime_fps_requirement);
    write_file_atomic(out_csv, time_table_csv(rows));
    std::cout << model << ": mean " << fmt_metric(stats.mean_ms, 1) << " ms, "
              << fmt_metric(stats.fps, 1) << " FPS, realtime "
              << (stats.feasible ? "yes" : "no") << "\n";
    return 0;
}

// ---- report ----

std::vector<std::pair<std::string, BenchStats>> parse_time_csv(
    const std::string& text) {
    std::vector<std::pair<std::string, BenchStats>> out;
    std::istringstream iss(text);
    std::string line;
    std::getline(iss, line);  // header
    while (std::getline(iss, line)) {
        std::istringstream ls(line);
        std::string model, ms, fps, mem, rt;
        if (!std::getline(ls, model, ',') || !std::getline(ls, ms, ',') ||
            !std::getline(ls, fps, ',') || !std::getline(ls, mem, ',') ||
            !std::getline(ls, rt, ','))
            continue;
        BenchStats s;
        s.latencies_ms = {std::stod(ms)};
        s.mean_ms = std::stod(ms);
        s.median_ms = s.p95_ms = s.mean_ms;
        s.fps = std::stod(fps);
        if (mem != "-") s.peak_memory_mb = std::stod(mem);
        s.feasible = rt == "yes";
        out.emplace_back(model, s);
    }
    return out;
}

int cmd_report(const std::vector<std::string>& eval_files,
               const std::string& bench_csv, const std::string& out) {
    ReportSpec spec;
    std::vector<std::pair<std::string, BenchStats>> bench;
    if (!bench_csv.empty()) bench = parse_time_csv(read_file(bench_csv));
    for (const auto& f : eval_files) {
        auto [model, r] = parse_eval_result(read_file(f));
        if (model.empty()) throw DataError("no model name in " + f);
        ReportRow row{model, r, std::nullopt};
        for (const auto& [bm, bs] : bench)
            if (bm == model) row.bench = bs;
        spec.rows.push_back(std::move(row));
    }
    emit_report(spec, out);
    std::cout << "report written under " << out << "\n";
    return 0;
}

// ---- overlay ----

// 3x5 glyphs for confidence labels.
const std::map<char, std::array<std::uint8_t, 5>>& glyphs() {
    static const std::map<char, std::array<std::uint8_t, 5>> g = {
        {'0', {0b111, 0b101, 0b101, 0b101, 0b111}},
        {'1', {0b010, 0b110, 0b010, 0b010, 0b111}},
        {'2', {0b111, 0b001, 0b111, 0b100, 0b111}},
        {'3', {0b111, 0b001, 0b111, 0b001, 0b111}},
        {'4', {0b101, 0b101, 0b111, 0b001, 0b001}},
        {'5', {0b111, 0b100, 0b111, 0b001, 0b111}},
        {'6', {0b111, 0b100, 0b111, 0b101, 0b111}},
        {'7', {0b111, 0b001, 0b010, 0b010, 0b010}},
        {'8', {0b111, 0b101, 0b111, 0b101, 0b111}},
        {'9', {0b111, 0b101, 0b111, 0b001, 0b111}},
        {'.', {0b000, 0b000, 0b000, 0b000, 0b010}},
    };
    return g;
}

void draw_label(Image& img, int x, int y, const std::string& text,
                std::array<std::uint8_t, 3> color) {
    for (char c : text) {
        auto it = glyphs().find(c);
        if (it != glyphs().end()) {
            for (int r = 0; r < 5; ++r)
                for (int b = 0; b < 3; ++b)
                    if (it->second[std::size_t(r)] & (0b100 >> b)) {
                        int px = x + b, py = y + r;
                        if (px >= 0 && py >= 0 && px < img.width() &&
                            py < img.height())
                            img.set(px, py, color[0], color[1], color[2]);
                    }
        }
        x += 4;
    }
}

int cmd_overlay(const std::string& image_path, const std::string& dets_path,
                const std::string& out_path) {
    Image img = read_bmp(image_path);
    auto dets = parse_detections(read_file(dets_path));
    const std::array<std::uint8_t, 3> color = {255, 60, 60};
    for (const auto& d : dets) {
        BBoxAbs b = to_abs(d.box, img.dims());
        draw_rect(img, b, color);
        char conf[16];
        std::snprintf(conf, sizeof(conf), "%.2f", d.confidence);
        draw_label(img, int(b.x1) + 2, std::max(0, int(b.y1) - 7), conf, color);
    }
    fs::path tmp = out_path + ".tmp";
    write_bmp(img, tmp.string());
    fs::rename(tmp, out_path);
    std::cout << "wrote " << out_path << " (" << dets.size() << " boxes)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"buoybench: detection evaluation, augmentation and benchmarking"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--seed", seed, "global RNG seed (default 0)");
    app.add_option("--jobs", jobs, "worker threads for parallel stages");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    SceneConfig scfg;
    int synth_n = 50;
    std::string synth_out = default_out_dir();
    std::string synth_name = "synthetic";
    std::string weather = "clear";
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--n", synth_n, "number of images (default 50)");
    synth->add_option("--width", scfg.dims.width, "image width (default 640)");
    synth->add_option("--height", scfg.dims.height, "image height (default 480)");
    synth->add_option("--lines", scfg.n_lines, "buoy lines (default 3)");
    synth->add_option("--buoys-per-line", scfg.buoys_per_line,
                      "buoys per line (default 6)");
    synth->add_option("--horizon", scfg.horizon_y,
                      "horizon height fraction (default 0.35)");
    synth->add_option("--decay", scfg.perspective_decay,
                      "radius decay per depth step (default 0.8)");
    synth->add_option("--base-radius", scfg.base_radius,
                      "nearest buoy radius px (0 = auto)");
    synth->add_option("--weather", weather,
                      "clear | choppy | foggy | adverse (default clear)");
    synth->add_option("--fog-alpha", scfg.fog_alpha, "fog strength (default 0.5)");
    synth->add_option("--noise-sigma", scfg.noise_sigma,
                      "adverse noise sigma (default 8)");
    synth->add_option("--rain-density", scfg.rain_density,
                      "rain streaks per pixel (default 0.0015)");
    synth->add_option("--name", synth_name, "dataset name");

    // split
    auto* split = app.add_subcommand("split", "deterministic train/val/test split");
    std::string split_manifest, split_out = default_out_dir();
    std::string ratios = "0.7,0.1,0.2";
    split->add_option("--manifest", split_manifest, "input manifest")->required();
    split->add_option("--out", split_out, "output directory");
    split->add_option("--ratios", ratios, "train,val,test (default 0.7,0.1,0.2)");

    // perturb
    auto* perturb = app.add_subcommand(
        "perturb", "derive detection files from ground truth via an error model");
    std::string pt_manifest, pt_out = default_out_dir();
    ErrorModel em;
    perturb->add_option("--manifest", pt_manifest, "input manifest")->required();
    perturb->add_option("--out", pt_out, "detections output directory");
    perturb->add_option("--drop", em.drop_rate, "GT drop probability (default 0)");
    perturb->add_option("--jitter", em.jitter_sigma,
                        "corner jitter sigma px (default 0)");
    perturb->add_option("--spurious", em.spurious_rate,
                        "expected false boxes per image (default 0)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "match, PR, AP/mAP, F1");
    std::string ev_gt, ev_dets, ev_out = default_out_dir();
    std::string ev_model = "model", ev_split = "all";
    PostprocessConfig pp;
    evaluate->add_option("--gt", ev_gt, "ground-truth manifest")->required();
    evaluate->add_option("--dets", ev_dets, "detections directory")->required();
    evaluate->add_option("--out", ev_out, "output directory");
    evaluate->add_option("--model", ev_model, "model name for reporting");
    evaluate->add_option("--split", ev_split, "train | val | test | all");
    evaluate->add_option("--conf", pp.conf_threshold,
                         "confidence threshold (default 0.001)");
    evaluate->add_option("--nms-iou", pp.nms_iou_threshold,
                         "NMS IoU threshold (default 0.65)");
    evaluate->add_option("--max-det", pp.max_detections,
                         "max detections per image (default 300)");

    // augment
    auto* augment = app.add_subcommand("augment", "image+label augmentation suite");
    std::string ag_manifest, ag_out = default_out_dir(), ag_config;
    int ag_count = 0;
    AugmentConfig acfg;
    augment->add_option("--manifest", ag_manifest, "input manifest")->required();
    augment->add_option("--out", ag_out, "output directory");
    augment->add_option("--config", ag_config, "augment config file");
    augment->add_option("--count", ag_count, "outputs (default: pool size)");
    augment->add_option("--hsv-h", acfg.hsv_h, "HSV hue gain (default 0.015)");
    augment->add_option("--hsv-s", acfg.hsv_s, "HSV saturation gain (default 0.7)");
    augment->add_option("--hsv-v", acfg.hsv_v, "HSV value gain (default 0.4)");
    augment->add_option("--degrees", acfg.degrees, "rotation degrees (default 0)");
    augment->add_option("--translate", acfg.translate, "translation (default 0.1)");
    augment->add_option("--scale", acfg.scale, "scale (default 0.5)");
    augment->add_option("--shear", acfg.shear, "shear degrees (default 0)");
    augment->add_option("--perspective", acfg.perspective,
                        "perspective (default 0)");
    augment->add_option("--flipud", acfg.flip_ud_prob,
                        "flip up-down prob (default 0)");
    augment->add_option("--fliplr", acfg.flip_lr_prob,
                        "flip left-right prob (default 0.5)");
    augment->add_option("--mosaic", acfg.mosaic_prob, "mosaic prob (default 1.0)");
    augment->add_option("--mixup", acfg.mixup_prob, "mixup prob (default 0.05)");

    // bench
    auto* bench = app.add_subcommand("bench", "latency/FPS/memory benchmark");
    std::string bn_manifest, bn_cmd, bn_out = "bench.csv", bn_model = "model";
    BenchConfig bcfg;
    bool bn_persistent = false;
    bench->add_option("--manifest", bn_manifest, "image manifest")->required();
    bench
        ->add_option("--cmd", bn_cmd,
                     "target command; {image} and {out} are substituted in "
                     "per-call mode, or fed as '<image>\\t<out>' lines on "
                     "stdin in persistent mode")
        ->required();
    bench->add_option("--warmup", bcfg.warmup_iterations,
                      "warmup iterations (default 10)");
    bench->add_option("--iters", bcfg.measured_iterations,
                      "measured iterations (default 100)");
    bench->add_option("--fps-req", bcfg.realtime_fps_requirement,
                      "real-time FPS requirement (default 15)");
    bench->add_flag("--persistent", bn_persistent, "persistent-process mode");
    bench->add_flag("--memory", bcfg.sample_memory, "poll peak resident memory");
    bench->add_option("--out", bn_out, "output CSV (default bench.csv)");
    bench->add_option("--model", bn_model, "model name for the report row");

    // report
    auto* report = app.add_subcommand("report", "tables and figures");
    std::vector<std::string> rp_evals;
    std::string rp_bench, rp_out = default_out_dir();
    report->add_option("--eval", rp_evals, "eval result files")->required();
    report->add_option("--bench", rp_bench, "time-metrics CSV from bench");
    report->add_option("--out", rp_out, "output directory");

    // overlay
    auto* overlay = app.add_subcommand("overlay", "draw detections on an image");
    std::string ov_image, ov_dets, ov_out;
    overlay->add_option("--image", ov_image, "input BMP")->required();
    overlay->add_option("--dets", ov_dets, "detection file")->required();
    overlay->add_option("--out", ov_out, "output BMP")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth) {
            scfg.weather = weather_from_string(weather);
            scfg.rng_seed = seed;
            return cmd_synth(scfg, synth_n, seed, synth_out, synth_name);
        }
        if (*split) return cmd_split(split_manifest, split_out, ratios, seed);
        if (*perturb) return cmd_perturb(pt_manifest, pt_out, em, seed);
        if (*evaluate)
            return cmd_evaluate(ev_gt, ev_dets, pp, ev_out, ev_model, ev_split);
        if (*augment) {
            if (!ag_config.empty()) acfg = load_augment_config(ag_config);
            acfg.rng_seed = seed;
            return cmd_augment(ag_manifest, ag_out, acfg, ag_count, jobs);
        }
        if (*bench)
            return cmd_bench(bn_manifest, bn_cmd, bcfg, bn_persistent, bn_out,
                             bn_model);
        if (*report) return cmd_report(rp_evals, rp_bench, rp_out);
        if (*overlay) return cmd_overlay(ov_image, ov_dets, ov_out);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
