#include "buoybench/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace buoybench {
namespace fs = std::filesystem;

std::string fmt_metric(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    // Half-up; the epsilon absorbs binary representation of decimal inputs.
    double r = std::floor(v * scale + 0.5 + 1e-9) / scale;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, r);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

std::string performance_table_csv(const ReportSpec& spec) {
    std::string out = "Model,F1,Precision,Recall,mAP,mAP@0.5\n";
    for (const auto& r : spec.rows) {
        out += r.model + "," + fmt_metric(r.eval.f1) + "," +
               fmt_metric(r.eval.precision) + "," + fmt_metric(r.eval.recall) +
               "," + fmt_metric(r.eval.map) + "," + fmt_metric(r.eval.map50) +
               "\n";
    }
    return out;
}

std::string performance_table_text(const ReportSpec& spec) {
    std::ostringstream out;
    out << "Model        F1     Precision  Recall  mAP    mAP@0.5\n";
    for (const auto& r : spec.rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%-12s %-6s %-10s %-7s %-6s %s\n",
                      r.model.c_str(), fmt_metric(r.eval.f1).c_str(),
                      fmt_metric(r.eval.precision).c_str(),
                      fmt_metric(r.eval.recall).c_str(),
                      fmt_metric(r.eval.map).c_str(),
                      fmt_metric(r.eval.map50).c_str());
        out << line;
    }
    return out.str();
}

std::string time_table_csv(const std::vector<FeasibilityRow>& rows) {
    std::string out = "Model,Inference(ms),FPS,Memory(MB),Realtime\n";
    for (const auto& r : rows) {
        out += r.model + "," + fmt_metric(r.mean_ms, 1) + "," +
               fmt_metric(r.fps, 1) + "," +
               (r.peak_memory_mb ? fmt_metric(*r.peak_memory_mb, 1)
                                 : std::string("-")) +
               "," + (r.feasible ? "yes" : "no") + "\n";
    }
    return out;
}

std::string grouped_bars_svg(const std::vector<std::string>& models,
                             const std::vector<BarMetric>& metrics) {
    const int bar_w = 28, gap = 10, group_gap = 40;
    const int chart_h = 220, margin = 50;
    const std::size_t n_metrics = metrics.size();
    const int group_w = int(n_metrics) * (bar_w + gap) + group_gap;
    const int width = margin * 2 + int(models.size()) * group_w;
    const int height = chart_h + margin * 2 + 40;
    const char* palette[] = {"#4C72B0", "#DD8452", "#55A868", "#C44E52",
                             "#8172B3", "#937860"};

    double vmax = 0;
    for (const auto& m : metrics)
        for (const auto& v : m.values)
            if (v) vmax = std::max(vmax, *v / m.scale);
    if (vmax <= 0) vmax = 1;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin + chart_h
        << "\" x2=\"" << width - margin << "\" y2=\"" << margin + chart_h
        << "\" stroke=\"black\"/>\n";

    bool any_missing = false;
    for (std::size_t g = 0; g < models.size(); ++g) {
        int gx = margin + int(g) * group_w;
        for (std::size_t m = 0; m < n_metrics; ++m) {
            if (g >= metrics[m].values.size() || !metrics[m].values[g]) {
                any_missing = true;
                continue;
            }
            double v = *metrics[m].values[g] / metrics[m].scale;
            int h = int(std::lround(v / vmax * chart_h));
            int x = gx + int(m) * (bar_w + gap);
            int y = margin + chart_h - h;
            svg << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
                << "\" height=\"" << h << "\" fill=\"" << palette[m % 6]
                << "\"/>\n";
            svg << "<text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
                << "\" text-anchor=\"middle\">"
                << fmt_metric(*metrics[m].values[g],
                              metrics[m].scale == 1.0 ? 3 : 1)
                << "</text>\n";
        }
        svg << "<text x=\"" << gx + (group_w - group_gap) / 2 << "\" y=\""
            << margin + chart_h + 18 << "\" text-anchor=\"middle\">" << models[g]
            << "</text>\n";
    }
    // Legend.
    for (std::size_t m = 0; m < n_metrics; ++m) {
        int y = margin / 2 + int(m) * 0;
        int x = margin + int(m) * 150;
        svg << "<rect x=\"" << x << "\" y=\"" << y - 10
            << "\" width=\"12\" height=\"12\" fill=\"" << palette[m % 6]
            << "\"/>\n";
        svg << "<text x=\"" << x + 16 << "\" y=\"" << y << "\">"
            << metrics[m].label << "</text>\n";
    }
    if (any_missing) {
        svg << "<text x=\"" << margin << "\" y=\"" << height - 10
            << "\">missing metrics omitted</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

std::string eval_cells(const std::optional<EvalResult>& r) {
    if (!r) return "-,-,-,-,-";
    return fmt_metric(r->f1) + "," + fmt_metric(r->precision) + "," +
           fmt_metric(r->recall) + "," + fmt_metric(r->map) + "," +
           fmt_metric(r->map50);
}

std::vector<std::string> matrix_test_sets(const CrossEvalMatrix& matrix) {
    std::set<std::string> sets;
    for (const auto& [model, per_set] : matrix)
        for (const auto& [name, cell] : per_set) sets.insert(name);
    return {sets.begin(), sets.end()};
}

}  // namespace

std::string ablation_matrix_csv(const CrossEvalMatrix& matrix) {
    auto sets = matrix_test_sets(matrix);
    std::string out = "Trained on";
    for (const auto& s : sets)
        out += "," + s + " F1," + s + " Precision," + s + " Recall," + s +
               " mAP," + s + " mAP@0.5";
    out += "\n";
    for (const auto& [model, per_set] : matrix) {
        out += model;
        for (const auto& s : sets) {
            auto it = per_set.find(s);
            out += "," + eval_cells(it == per_set.end() ? std::nullopt : it->second);
        }
        out += "\n";
    }
    return out;
}

std::string ablation_matrix_text(const CrossEvalMatrix& matrix) {
    auto sets = matrix_test_sets(matrix);
    std::ostringstream out;
    for (const auto& s : sets) {
        out << "== Test set: " << s << " ==\n";
        out << "Trained on        F1     Precision  Recall  mAP    mAP@0.5\n";
        for (const auto& [model, per_set] : matrix) {
            auto it = per_set.find(s);
            std::optional<EvalResult> cell =
                it == per_set.end() ? std::nullopt : it->second;
            char line[200];
            if (cell) {
                std::snprintf(line, sizeof(line),
                              "%-17s %-6s %-10s %-7s %-6s %s\n", model.c_str(),
                              fmt_metric(cell->f1).c_str(),
                              fmt_metric(cell->precision).c_str(),
                              fmt_metric(cell->recall).c_str(),
                              fmt_metric(cell->map).c_str(),
                              fmt_metric(cell->map50).c_str());
            } else {
                std::snprintf(line, sizeof(line),
                              "%-17s -      -          -       -      -\n",
                              model.c_str());
            }
            out << line;
        }
    }
    return out.str();
}

std::string serialize_eval_result(const std::string& model, const EvalResult& r) {
    std::ostringstream out;
    out.precision(9);
    out << std::fixed;
    out << "model " << model << "\n";
    out << "map " << r.map << "\n";
    out << "map50 " << r.map50 << "\n";
    out << "f1 " << r.f1 << "\n";
    out << "precision " << r.precision << "\n";
    out << "recall " << r.recall << "\n";
    out << "operating_confidence " << r.operating_confidence << "\n";
    for (std::size_t i = 0; i < kIouThresholds.size(); ++i)
        out << "ap_" << fmt_metric(kIouThresholds[i], 2) << " "
            << r.ap_per_threshold[i] << "\n";
    return out.str();
}

std::pair<std::string, EvalResult> parse_eval_result(const std::string& text) {
    std::istringstream iss(text);
    std::string key;
    std::string model;
    EvalResult r;
    std::string line;
    while (std::getline(iss, line)) {
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        if (key == "model") {
            ls >> model;
        } else if (key == "map") {
            ls >> r.map;
        } else if (key == "map50") {
            ls >> r.map50;
        } else if (key == "f1") {
            ls >> r.f1;
        } else if (key == "precision") {
            ls >> r.precision;
        } else if (key == "recall") {
            ls >> r.recall;
        } else if (key == "operating_confidence") {
            ls >> r.operating_confidence;
        } else if (key.rfind("ap_", 0) == 0) {
            double thr = std::stod(key.substr(3));
            for (std::size_t i = 0; i < kIouThresholds.size(); ++i)
                if (std::abs(kIouThresholds[i] - thr) < 1e-6)
                    ls >> r.ap_per_threshold[i];
        }
    }
    return {model, r};
}

void emit_report(const ReportSpec& spec, const std::string& out_dir) {
    std::set<std::string> names;
    for (const auto& r : spec.rows)
        if (!names.insert(r.model).second)
            throw std::invalid_argument("duplicate model in report: " + r.model);

    fs::path tables = fs::path(out_dir) / "tables";
    fs::path figures = fs::path(out_dir) / "figures";
    write_file_atomic((tables / "performance.csv").string(),
                      performance_table_csv(spec));
    write_file_atomic((tables / "performance.txt").string(),
                      performance_table_text(spec));

    std::vector<std::string> models;
    BarMetric m_map{"mAP", {}, 1.0};
    BarMetric m_map50{"mAP@0.5", {}, 1.0};
    BarMetric m_fps{"FPS/100", {}, 100.0};
    bool any_bench = false;
    for (const auto& r : spec.rows) {
        models.push_back(r.model);
        m_map.values.push_back(r.eval.map);
        m_map50.values.push_back(r.eval.map50);
        if (r.bench) {
            m_fps.values.push_back(r.bench->fps);
            any_bench = true;
        } else {
            m_fps.values.push_back(std::nullopt);
        }
    }
    std::vector<BarMetric> metrics = {m_map, m_map50};
    if (any_bench) metrics.push_back(m_fps);
    write_file_atomic((figures / "metrics.svg").string(),
                      grouped_bars_svg(models, metrics));

    if (any_bench) {
        std::vector<std::pair<std::string, BenchStats>> bs;
        for (const auto& r : spec.rows)
            if (r.bench) bs.emplace_back(r.model, *r.bench);
        auto rows = feasibility_report(bs, 15.0);
        write_file_atomic((tables / "time.csv").string(), time_table_csv(rows));
    }
}

}  // namespace buoybench
