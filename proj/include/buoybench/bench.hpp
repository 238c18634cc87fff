#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace buoybench {

struct BenchConfig {
    int warmup_iterations = 10;
    int measured_iterations = 100;
    double realtime_fps_requirement = 15.0;
    int memory_poll_interval_ms = 50;
    bool sample_memory = false;

    bool valid() const {
        return warmup_iterations >= 0 && measured_iterations >= 1 &&
               realtime_fps_requirement > 0;
    }
};

struct BenchStats {
    std::vector<double> latencies_ms;  // measured iterations only
    double mean_ms = 0;
    double median_ms = 0;
    double p95_ms = 0;
    double fps = 0;  // 1000 / mean_ms
    std::optional<double> peak_memory_mb;
    bool feasible = false;  // fps >= requirement
    bool valid = true;      // false when the target failed mid-run
};

/// Derive the summary fields from a latency list. fps comes from the mean,
/// matching how published latency/FPS pairs relate.
BenchStats stats_from_latencies(std::vector<double> latencies_ms,
                                double fps_requirement);

/// Times an image-in/detections-out callable. The callable returns false to
/// signal failure; a failed call aborts the run and flags the stats invalid.
BenchStats run_bench(const std::function<bool()>& target, const BenchConfig& cfg);

struct FeasibilityRow {
    std::string model;
    double mean_ms;
    double fps;
    std::optional<double> peak_memory_mb;
    bool feasible;
};

/// Rows sorted by fps descending with verdicts at the given requirement.
std::vector<FeasibilityRow> feasibility_report(
    const std::vector<std::pair<std::string, BenchStats>>& stats,
    double fps_requirement);

}  // namespace buoybench
