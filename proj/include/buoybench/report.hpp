#pragma once

#include <optional>
#include <string>
#include <vector>

#include "buoybench/bench.hpp"
#include "buoybench/evaluation.hpp"

namespace buoybench {

struct ReportRow {
    std::string model;
    EvalResult eval;
    std::optional<BenchStats> bench;
};

struct ReportSpec {
    std::vector<ReportRow> rows;  // model names unique
};

/// Fixed-point formatting, half-up. 3 decimals for ratios, 1 for ms/FPS.
std::string fmt_metric(double v, int decimals = 3);

/// Columns: Model,F1,Precision,Recall,mAP,mAP@0.5. Returns CSV text.
std::string performance_table_csv(const ReportSpec& spec);
std::string performance_table_text(const ReportSpec& spec);

/// Latency/FPS/memory/feasibility rows, fps descending.
std::string time_table_csv(const std::vector<FeasibilityRow>& rows);

/// Grouped bar chart: one group per model, one bar per metric. Metrics are
/// (label, per-model optional value); absent values omit the bar with a
/// legend note. Deterministic output, no timestamps.
struct BarMetric {
    std::string label;
    std::vector<std::optional<double>> values;  // parallel to model order
    double scale = 1.0;  // bars show value/scale so mixed units share an axis
};
std::string grouped_bars_svg(const std::vector<std::string>& models,
                             const std::vector<BarMetric>& metrics);

/// Rows = training set, columns = F1/P/R/mAP/mAP@0.5 per test set; absent
/// cells render as "-".
std::string ablation_matrix_csv(const CrossEvalMatrix& matrix);
std::string ablation_matrix_text(const CrossEvalMatrix& matrix);

/// Key/value result file for one evaluation run.
std::string serialize_eval_result(const std::string& model, const EvalResult& r);
std::pair<std::string, EvalResult> parse_eval_result(const std::string& text);

/// Writes tables/ and figures/ under out_dir (atomic per file).
void emit_report(const ReportSpec& spec, const std::string& out_dir);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace buoybench
