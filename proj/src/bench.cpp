#include "buoybench/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace buoybench {

namespace {

/// Current resident set of this process in MB, from /proc. Returns nullopt
/// where procfs is unavailable.
std::optional<double> current_rss_mb() {
    std::ifstream in("/proc/self/status");
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("VmRSS:", 0) == 0) {
            std::istringstream iss(line.substr(6));
            double kb;
            if (iss >> kb) return kb / 1024.0;
        }
    }
    return std::nullopt;
}

double percentile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0;
    double idx = q * double(sorted.size() - 1);
    std::size_t lo = std::size_t(std::floor(idx));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - double(lo);
    return sorted[lo] * (1 - frac) + sorted[hi] * frac;
}

}  // namespace

BenchStats stats_from_latencies(std::vector<double> latencies_ms,
                                double fps_requirement) {
    BenchStats s;
    s.latencies_ms = latencies_ms;
    if (latencies_ms.empty()) {
        s.valid = false;
        return s;
    }
    double sum = 0;
    for (double v : latencies_ms) sum += v;
    s.mean_ms = sum / double(latencies_ms.size());
    std::sort(latencies_ms.begin(), latencies_ms.end());
    s.median_ms = percentile(latencies_ms, 0.5);
    s.p95_ms = percentile(latencies_ms, 0.95);
    s.fps = s.mean_ms > 0 ? 1000.0 / s.mean_ms : 0;
    s.feasible = s.fps >= fps_requirement;
    return s;
}

BenchStats run_bench(const std::function<bool()>& target, const BenchConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("invalid bench config");

    std::atomic<bool> stop{false};
    std::atomic<double> peak_mb{0};
    std::thread observer;
    if (cfg.sample_memory) {
        observer = std::thread([&] {
            while (!stop.load()) {
                if (auto mb = current_rss_mb()) {
                    double prev = peak_mb.load();
                    while (*mb > prev && !peak_mb.compare_exchange_weak(prev, *mb)) {
                    }
                }
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(cfg.memory_poll_interval_ms));
            }
        });
    }

    bool failed = false;
    for (int i = 0; i < cfg.warmup_iterations && !failed; ++i)
        failed = !target();

    std::vector<double> latencies;
    latencies.reserve(std::size_t(cfg.measured_iterations));
    for (int i = 0; i < cfg.measured_iterations && !failed; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        failed = !target();
        auto t1 = std::chrono::steady_clock::now();
        if (!failed)
            latencies.push_back(
                std::chrono::duration<double, std::milli>(t1 - t0).count());
    }

    if (observer.joinable()) {
        stop.store(true);
        observer.join();
    }

    BenchStats s = stats_from_latencies(std::move(latencies),
                                        cfg.realtime_fps_requirement);
    if (cfg.sample_memory && peak_mb.load() > 0) s.peak_memory_mb = peak_mb.load();
    if (failed) s.valid = false;
    return s;
}

std::vector<FeasibilityRow> feasibility_report(
    const std::vector<std::pair<std::string, BenchStats>>& stats,
    double fps_requirement) {
    if (stats.empty()) throw std::invalid_argument("no bench stats to report");
    std::vector<FeasibilityRow> rows;
    rows.reserve(stats.size());
    for (const auto& [name, s] : stats)
        rows.push_back({name, s.mean_ms, s.fps, s.peak_memory_mb,
                        s.fps >= fps_requirement});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const FeasibilityRow& a, const FeasibilityRow& b) {
                         return a.fps > b.fps;
                     });
    return rows;
}

}  // namespace buoybench
