#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "buoybench/report.hpp"

using namespace buoybench;
namespace fs = std::filesystem;

namespace {

EvalResult eval_of(double f1, double p, double r, double map, double map50) {
    EvalResult e;
    e.f1 = f1;
    e.precision = p;
    e.recall = r;
    e.map = map;
    e.map50 = map50;
    for (std::size_t i = 0; i < e.ap_per_threshold.size(); ++i)
        e.ap_per_threshold[i] = map;
    return e;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("fmt_metric rounds half-up at fixed width") {
    CHECK(fmt_metric(0.8648) == "0.865");
    CHECK(fmt_metric(0.8644) == "0.864");
    CHECK(fmt_metric(0.5) == "0.500");
    CHECK(fmt_metric(0.0005) == "0.001");
    CHECK(fmt_metric(1.0) == "1.000");
    CHECK(fmt_metric(147.06, 1) == "147.1");
    CHECK(fmt_metric(24.5, 1) == "24.5");
}

TEST_CASE("performance table matches the published example row") {
    ReportSpec spec;
    spec.rows.push_back({"full-1280", eval_of(0.865, 0.890, 0.841, 0.559, 0.874), {}});
    CHECK(performance_table_csv(spec) ==
          "Model,F1,Precision,Recall,mAP,mAP@0.5\n"
          "full-1280,0.865,0.890,0.841,0.559,0.874\n");

    // Byte-stable across calls.
    CHECK(performance_table_csv(spec) == performance_table_csv(spec));
    CHECK(performance_table_text(spec) == performance_table_text(spec));
}

TEST_CASE("empty spec yields a header-only table") {
    CHECK(performance_table_csv({}) == "Model,F1,Precision,Recall,mAP,mAP@0.5\n");
}

TEST_CASE("time table formatting") {
    std::vector<FeasibilityRow> rows = {
        {"tiny-640", 6.8, 147.1, std::nullopt, true},
        {"full-1280", 75.4, 13.3, 512.25, false}};
    CHECK(time_table_csv(rows) ==
          "Model,Inference(ms),FPS,Memory(MB),Realtime\n"
          "tiny-640,6.8,147.1,-,yes\n"
          "full-1280,75.4,13.3,512.3,no\n");
}

TEST_CASE("grouped bars: one rect per present value plus a legend swatch") {
    std::vector<std::string> models = {"a", "b", "c", "d"};
    std::vector<BarMetric> metrics(3);
    metrics[0] = {"mAP", {0.5, 0.6, 0.7, 0.8}, 1.0};
    metrics[1] = {"mAP@0.5", {0.7, 0.8, 0.9, 0.95}, 1.0};
    metrics[2] = {"FPS/100", {147.1, 40.8, 62.1, 13.3}, 100.0};
    std::string svg = grouped_bars_svg(models, metrics);

    std::size_t rects = 0;
    for (std::size_t pos = 0; (pos = svg.find("<rect", pos)) != std::string::npos;
         ++pos)
        ++rects;
    // Background + 12 bars + 3 legend swatches.
    CHECK(rects == 1 + 12 + 3);
    CHECK(svg.find("missing metrics omitted") == std::string::npos);
    CHECK(svg == grouped_bars_svg(models, metrics));

    metrics[2].values[1] = std::nullopt;
    std::string with_gap = grouped_bars_svg(models, metrics);
    CHECK(with_gap.find("missing metrics omitted") != std::string::npos);
}

TEST_CASE("ablation matrix renders absent cells as dashes") {
    CrossEvalMatrix m;
    m["real"]["real"] = eval_of(0.9, 0.9, 0.9, 0.6, 0.9);
    m["real"]["synthetic"] = std::nullopt;
    m["synthetic"]["real"] = eval_of(0.5, 0.6, 0.45, 0.3, 0.5);
    m["synthetic"]["synthetic"] = eval_of(0.95, 0.95, 0.95, 0.7, 0.95);

    std::string csv = ablation_matrix_csv(m);
    CHECK(csv.find("real,0.900,0.900,0.900,0.600,0.900,-,-,-,-,-\n") !=
          std::string::npos);
    CHECK(csv.find("synthetic,0.500") != std::string::npos);
    CHECK(csv == ablation_matrix_csv(m));

    std::string text = ablation_matrix_text(m);
    CHECK(text.find("== Test set: real ==") != std::string::npos);
    CHECK(text.find("== Test set: synthetic ==") != std::string::npos);
    CHECK(text.find("-      -          -       -      -") != std::string::npos);
}

TEST_CASE("eval result round trip") {
    EvalResult e = eval_of(0.865, 0.890, 0.841, 0.559, 0.874);
    for (std::size_t i = 0; i < e.ap_per_threshold.size(); ++i)
        e.ap_per_threshold[i] = 0.9 - 0.05 * double(i);
    e.operating_confidence = 0.37;
    std::string text = serialize_eval_result("full-1280", e);
    auto [model, back] = parse_eval_result(text);
    CHECK(model == "full-1280");
    CHECK(back.map == doctest::Approx(e.map).epsilon(1e-8));
    CHECK(back.f1 == doctest::Approx(e.f1).epsilon(1e-8));
    CHECK(back.operating_confidence == doctest::Approx(0.37).epsilon(1e-8));
    for (std::size_t i = 0; i < e.ap_per_threshold.size(); ++i)
        CHECK(back.ap_per_threshold[i] ==
              doctest::Approx(e.ap_per_threshold[i]).epsilon(1e-8));
}

TEST_CASE("emit_report writes deterministic tables and figures") {
    ReportSpec spec;
    spec.rows.push_back({"tiny-640", eval_of(0.8, 0.82, 0.78, 0.5, 0.82),
                         stats_from_latencies({6.8}, 15.0)});
    spec.rows.push_back({"full-1280", eval_of(0.865, 0.890, 0.841, 0.559, 0.874),
                         stats_from_latencies({75.4}, 15.0)});

    auto dir = fs::temp_directory_path() / "bb_test_report";
    fs::remove_all(dir);
    emit_report(spec, dir.string());
    CHECK(fs::exists(dir / "tables" / "performance.csv"));
    CHECK(fs::exists(dir / "tables" / "performance.txt"));
    CHECK(fs::exists(dir / "tables" / "time.csv"));
    CHECK(fs::exists(dir / "figures" / "metrics.svg"));

    std::string csv1 = slurp(dir / "tables" / "performance.csv");
    std::string svg1 = slurp(dir / "figures" / "metrics.svg");
    emit_report(spec, dir.string());
    CHECK(slurp(dir / "tables" / "performance.csv") == csv1);
    CHECK(slurp(dir / "figures" / "metrics.svg") == svg1);

    std::string time_csv = slurp(dir / "tables" / "time.csv");
    CHECK(time_csv.find("tiny-640,6.8,147.1,-,yes") != std::string::npos);
    CHECK(time_csv.find("full-1280,75.4,13.3,-,no") != std::string::npos);

    spec.rows.push_back({"tiny-640", eval_of(0.1, 0.1, 0.1, 0.1, 0.1), {}});
    CHECK_THROWS_AS(emit_report(spec, dir.string()), std::invalid_argument);
    fs::remove_all(dir);
}
