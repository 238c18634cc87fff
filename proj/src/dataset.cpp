#include "buoybench/dataset.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "buoybench/rng.hpp"

namespace buoybench {
namespace fs = std::filesystem;

std::string to_string(Source s) {
    switch (s) {
        case Source::boat: return "boat";
        case Source::buoy_low_res: return "buoy_low_res";
        case Source::buoy_high_res: return "buoy_high_res";
        case Source::adverse: return "adverse";
        case Source::synthetic: return "synthetic";
    }
    return "synthetic";
}

std::string to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "test";
}

Source source_from_string(const std::string& s) {
    if (s == "boat") return Source::boat;
    if (s == "buoy_low_res") return Source::buoy_low_res;
    if (s == "buoy_high_res") return Source::buoy_high_res;
    if (s == "adverse") return Source::adverse;
    if (s == "synthetic") return Source::synthetic;
    throw std::invalid_argument("unknown source: " + s);
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw std::invalid_argument("unknown split: " + s);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream iss(line);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, int line, const char* what) {
    double v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw ParseError(line, std::string("non-numeric ") + what + ": " + tok);
    return v;
}

int parse_class(const std::string& tok, int line) {
    int v;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || v < 0)
        throw ParseError(line, "bad class id: " + tok);
    return v;
}

BBoxNorm parse_box(const std::vector<std::string>& toks, int line) {
    BBoxNorm b{parse_double(toks[1], line, "cx"), parse_double(toks[2], line, "cy"),
               parse_double(toks[3], line, "w"), parse_double(toks[4], line, "h")};
    if (!b.valid()) throw ParseError(line, "coordinate out of range");
    return b;
}

}  // namespace

std::vector<Annotation> parse_labels(const std::string& text) {
    std::vector<Annotation> out;
    std::istringstream iss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 5)
            throw ParseError(lineno, "expected 5 fields, got " +
                                         std::to_string(toks.size()));
        out.push_back({parse_class(toks[0], lineno), parse_box(toks, lineno)});
    }
    return out;
}

std::vector<Detection> parse_detections(const std::string& text) {
    std::vector<Detection> out;
    std::istringstream iss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(iss, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks.size() != 6)
            throw ParseError(lineno, "expected 6 fields, got " +
                                         std::to_string(toks.size()));
        double conf = parse_double(toks[5], lineno, "confidence");
        if (conf < 0 || conf > 1)
            throw ParseError(lineno, "confidence out of [0,1]: " + toks[5]);
        out.push_back({parse_class(toks[0], lineno), parse_box(toks, lineno), conf});
    }
    return out;
}

namespace {
std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}
}  // namespace

std::string serialize_labels(const std::vector<Annotation>& anns) {
    std::string out;
    for (const auto& a : anns) {
        out += std::to_string(a.class_id) + " " + fmt6(a.box.cx) + " " +
               fmt6(a.box.cy) + " " + fmt6(a.box.w) + " " + fmt6(a.box.h) + "\n";
    }
    return out;
}

std::string serialize_detections(const std::vector<Detection>& dets) {
    std::string out;
    for (const auto& d : dets) {
        out += std::to_string(d.class_id) + " " + fmt6(d.box.cx) + " " +
               fmt6(d.box.cy) + " " + fmt6(d.box.w) + " " + fmt6(d.box.h) + " " +
               fmt6(d.confidence) + "\n";
    }
    return out;
}

SplitSizes split_sizes(std::size_t n, const SplitSpec& spec) {
    // The epsilon keeps exact products like 0.7 * 700 from flooring to 489.
    auto part = [n](double ratio) {
        return static_cast<std::size_t>(std::floor(ratio * double(n) + 1e-9));
    };
    auto n_train = part(spec.train);
    auto n_val = part(spec.val);
    return {n_train, n_val, n - n_train - n_val};
}

DatasetManifest split_dataset(const DatasetManifest& m, const SplitSpec& spec) {
    if (!spec.valid()) throw std::invalid_argument("split ratios must sum to 1");
    if (m.entries.empty()) throw std::invalid_argument("empty manifest");
    for (const auto& e : m.entries)
        if (e.split) throw std::invalid_argument("manifest already split");

    std::vector<std::size_t> order(m.entries.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(spec.rng_seed);
    rng.shuffle(order);

    auto sizes = split_sizes(m.entries.size(), spec);
    DatasetManifest out = m;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        Split s = rank < sizes.train            ? Split::train
                  : rank < sizes.train + sizes.val ? Split::val
                                                   : Split::test;
        out.entries[order[rank]].split = s;
    }
    return out;
}

DatasetManifest pool(const std::vector<DatasetManifest>& manifests,
                     const std::string& name) {
    if (manifests.empty()) throw std::invalid_argument("pool of zero manifests");
    DatasetManifest out;
    out.name = name;
    out.source = manifests.front().source;
    out.class_names = manifests.front().class_names;
    std::set<std::string> seen;
    for (const auto& m : manifests) {
        if (m.class_names != out.class_names)
            throw std::invalid_argument("pool: incompatible class sets");
        for (auto e : m.entries) {
            if (!seen.insert(e.image_path).second)
                throw std::invalid_argument("pool: duplicate image path " +
                                            e.image_path);
            if (!e.source) e.source = m.source;
            e.split.reset();
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

std::string serialize_manifest(const DatasetManifest& m) {
    std::string out;
    out += "name " + m.name + "\n";
    out += "source " + to_string(m.source) + "\n";
    out += "classes";
    for (const auto& c : m.class_names) out += " " + c;
    out += "\n";
    for (const auto& e : m.entries) {
        out += "entry " + e.image_path + " " + std::to_string(e.dims.width) +
               " " + std::to_string(e.dims.height) + " " + e.label_path + " " +
               (e.split ? to_string(*e.split) : std::string("-")) + " " +
               (e.source ? to_string(*e.source) : std::string("-")) + "\n";
    }
    return out;
}

DatasetManifest parse_manifest(const std::string& text) {
    DatasetManifest m;
    m.class_names.clear();
    std::istringstream iss(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(iss, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] == "name" && toks.size() == 2) {
            m.name = toks[1];
        } else if (toks[0] == "source" && toks.size() == 2) {
            m.source = source_from_string(toks[1]);
        } else if (toks[0] == "classes") {
            m.class_names.assign(toks.begin() + 1, toks.end());
        } else if (toks[0] == "entry") {
            if (toks.size() != 7)
                throw ParseError(lineno, "entry needs 6 fields");
            ManifestEntry e;
            e.image_path = toks[1];
            e.dims.width = parse_class(toks[2], lineno);
            e.dims.height = parse_class(toks[3], lineno);
            if (!e.dims.valid()) throw ParseError(lineno, "bad dims");
            e.label_path = toks[4];
            if (toks[5] != "-") e.split = split_from_string(toks[5]);
            if (toks[6] != "-") e.source = source_from_string(toks[6]);
            if (!seen.insert(e.image_path).second)
                throw ParseError(lineno, "duplicate image path " + e.image_path);
            m.entries.push_back(std::move(e));
        } else {
            throw ParseError(lineno, "unrecognized manifest line: " + line);
        }
    }
    if (m.class_names.empty()) m.class_names = {"buoy"};
    return m;
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    DatasetManifest m = parse_manifest(read_file(path));
    fs::path base = fs::path(path).parent_path();
    for (auto& e : m.entries) {
        fs::path lp = base / e.label_path;
        if (fs::exists(lp)) e.annotations = parse_labels(read_file(lp.string()));
        for (const auto& a : e.annotations)
            if (!a.box.valid())
                throw std::runtime_error("invalid box in " + lp.string());
    }
    return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    fs::path tmp = fs::path(path).string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << serialize_manifest(m);
    }
    fs::rename(tmp, path);
}

}  // namespace buoybench
