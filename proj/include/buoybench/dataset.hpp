#pragma once

#include <optional>
#include <string>
#include <vector>

#include "buoybench/geometry.hpp"

namespace buoybench {

struct Annotation {
    int class_id = 0;
    BBoxNorm box;
};

struct Detection {
    int class_id = 0;
    BBoxNorm box;
    double confidence = 0;
};

enum class Source { boat, buoy_low_res, buoy_high_res, adverse, synthetic };
enum class Split { train, val, test };

std::string to_string(Source s);
std::string to_string(Split s);
Source source_from_string(const std::string& s);
Split split_from_string(const std::string& s);

struct ManifestEntry {
    std::string image_path;   // relative to the manifest file
    ImageDims dims;
    std::string label_path;
    std::vector<Annotation> annotations;
    std::optional<Split> split;
    std::optional<Source> source;  // per-entry tag, kept through pooling
};

struct DatasetManifest {
    std::string name;
    Source source = Source::synthetic;
    std::vector<std::string> class_names = {"buoy"};
    std::vector<ManifestEntry> entries;
};

struct SplitSpec {
    double train = 0.7, val = 0.1, test = 0.2;
    std::uint64_t rng_seed = 0;

    bool valid() const {
        return train >= 0 && val >= 0 && test >= 0 &&
               std::abs(train + val + test - 1.0) <= 1e-9;
    }
};

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what),
          line(line_) {}
};

/// Lines of `class cx cy w h`, normalized decimals. Empty file is an image
/// with no objects.
std::vector<Annotation> parse_labels(const std::string& text);

/// Lines of `class cx cy w h conf`.
std::vector<Detection> parse_detections(const std::string& text);

/// 6-decimal fixed formatting, LF line endings.
std::string serialize_labels(const std::vector<Annotation>& anns);
std::string serialize_detections(const std::vector<Detection>& dets);

/// Sizes for a (train, val, test) split of n entries: floor for train and
/// val, remainder to test.
struct SplitSizes {
    std::size_t train, val, test;
};
SplitSizes split_sizes(std::size_t n, const SplitSpec& spec);

/// Seeded shuffle then contiguous assignment. Entries must not already carry
/// a split.
DatasetManifest split_dataset(const DatasetManifest& m, const SplitSpec& spec);

/// Concatenates manifests. Each entry keeps its origin's source tag; split
/// assignments are cleared (a combined split is re-drawn on the pool).
/// Duplicate image paths across inputs are an error.
DatasetManifest pool(const std::vector<DatasetManifest>& manifests,
                     const std::string& name);

std::string serialize_manifest(const DatasetManifest& m);
DatasetManifest parse_manifest(const std::string& text);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

/// Mean luminance on [0,1] below which an image counts as too dark.
constexpr double kDefaultDarkLumaThreshold = 0.05;

}  // namespace buoybench
