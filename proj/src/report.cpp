// Report emission: summary table, per-experiment prediction dumps, and an
// actual-vs-predicted SVG line plot with the train/test boundary marked.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sentiforge/common.hpp"
#include "sentiforge/csv.hpp"
#include "sentiforge/runner.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::runner {

namespace fs = std::filesystem;

namespace {

struct PlotSeries {
    std::vector<double> values;
    const char* color;
    const char* label;
};

std::string format_svg_number(double v) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << v;
    return out.str();
}

// Minimal line plot: x is the sample index across train+test, y is USD.
std::string render_plot(const ExperimentResult& result) {
    const double width = 960.0;
    const double height = 420.0;
    const double margin = 50.0;

    std::vector<double> actual;
    std::vector<double> predicted_train;
    std::vector<double> predicted_test;
    for (const PredictionPoint& p : result.train_predictions) {
        actual.push_back(p.actual);
        predicted_train.push_back(p.predicted);
    }
    const std::size_t split = actual.size();
    for (const PredictionPoint& p : result.test_predictions) {
        actual.push_back(p.actual);
        predicted_test.push_back(p.predicted);
    }
    if (actual.empty()) throw DataError("render_plot: no predictions");

    double lo = actual.front();
    double hi = actual.front();
    auto widen = [&](const std::vector<double>& vs) {
        for (double v : vs) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    widen(actual);
    widen(predicted_train);
    widen(predicted_test);
    if (hi <= lo) hi = lo + 1.0;

    const double n = static_cast<double>(actual.size());
    auto x_of = [&](std::size_t i) {
        return margin + (width - 2 * margin) * (n > 1 ? i / (n - 1) : 0.0);
    };
    auto y_of = [&](double v) {
        return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo);
    };

    auto polyline = [&](const std::vector<double>& vs, std::size_t offset,
                        const char* color) {
        std::ostringstream out;
        out << "  <polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) out << ' ';
            out << format_svg_number(x_of(offset + i)) << ','
                << format_svg_number(y_of(vs[i]));
        }
        out << "\"/>\n";
        return out.str();
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
        << height << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    svg << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin
        << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    // train/test boundary
    if (split > 0 && split < actual.size()) {
        const double xb = x_of(split);
        svg << "  <line x1=\"" << format_svg_number(xb) << "\" y1=\"" << margin
            << "\" x2=\"" << format_svg_number(xb) << "\" y2=\""
            << height - margin
            << "\" stroke=\"gray\" stroke-dasharray=\"4,3\"/>\n";
    }
    svg << polyline(actual, 0, "black");
    svg << polyline(predicted_train, 0, "#1f77b4");
    svg << polyline(predicted_test, split, "#2ca02c");

    svg << "  <text x=\"" << margin << "\" y=\"" << margin - 14
        << "\" font-family=\"sans-serif\" font-size=\"14\">experiment "
        << result.config_id << " (" << result.architecture_label
        << ", seed " << result.seed << ") - actual (black), predicted train "
        << "(blue), predicted test (green)</text>\n";
    svg << "  <text x=\"" << margin << "\" y=\"" << height - margin + 28
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << lo << " .. " << hi
        << " USD, " << actual.size() << " hourly samples, test RMSE "
        << result.metrics.test_rmse << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void write_predictions(const ExperimentResult& result, const std::string& path) {
    csv::Table t;
    t.header = {"timestamp", "actual", "predicted", "split"};
    for (const PredictionPoint& p : result.train_predictions) {
        t.rows.push_back({utc::format_timestamp(p.timestamp),
                          csv::format_double(p.actual),
                          csv::format_double(p.predicted), "train"});
    }
    for (const PredictionPoint& p : result.test_predictions) {
        t.rows.push_back({utc::format_timestamp(p.timestamp),
                          csv::format_double(p.actual),
                          csv::format_double(p.predicted), "test"});
    }
    csv::write_file(path, t);
}

void write_meta(const ExperimentResult& result, const std::string& path) {
    nlohmann::json meta;
    meta["id"] = result.config_id;
    meta["seed"] = result.seed;
    meta["architecture"] = result.architecture_label;
    meta["epoch_loss"] = result.epoch_loss;
    meta["wall_seconds"] = result.wall_seconds;
    meta["train_rmse"] = result.metrics.train_rmse;
    meta["test_rmse"] = result.metrics.test_rmse;
    meta["train_mae"] = result.metrics.train_mae;
    meta["test_mae"] = result.metrics.test_mae;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << meta.dump(2) << '\n';
}

void write_dataset_meta(const ExperimentResult& result, const std::string& path) {
    nlohmann::json meta;
    meta["seq_len"] = result.seq_len;
    meta["stride"] = result.stride;
    meta["n_samples"] = result.n_samples;
    meta["split_index"] = result.split_index;
    meta["scaler"]["target_min"] = result.scaler.target_min;
    meta["scaler"]["target_max"] = result.scaler.target_max;
    meta["scaler"]["feature_min"] = std::vector<double>(
        result.scaler.feature_min.data(),
        result.scaler.feature_min.data() + result.scaler.feature_min.size());
    meta["scaler"]["feature_max"] = std::vector<double>(
        result.scaler.feature_max.data(),
        result.scaler.feature_max.data() + result.scaler.feature_max.size());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << meta.dump(2) << '\n';
}

}  // namespace

std::string emit_report(const std::vector<ExperimentResult>& results,
                        const std::string& out_dir) {
    if (results.empty()) throw ConfigError("emit_report: no results");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw DataError("cannot create report directory " + out_dir + ": " +
                            ec.message());

    std::vector<const ExperimentResult*> ordered;
    for (const ExperimentResult& r : results) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const ExperimentResult* a, const ExperimentResult* b) {
                  return a->config_id < b->config_id;
              });

    // Wall time sits in the final column; every other column is
    // deterministic for a fixed seed.
    csv::Table summary;
    summary.header = {"id",        "train_rmse", "test_rmse", "train_mae",
                      "test_mae",  "seed",       "wall_time_s"};
    for (const ExperimentResult* r : ordered) {
        summary.rows.push_back({std::to_string(r->config_id),
                                csv::format_double(r->metrics.train_rmse),
                                csv::format_double(r->metrics.test_rmse),
                                csv::format_double(r->metrics.train_mae),
                                csv::format_double(r->metrics.test_mae),
                                std::to_string(r->seed),
                                csv::format_double(r->wall_seconds)});
    }
    const std::string summary_path = (fs::path(out_dir) / "summary.csv").string();
    csv::write_file(summary_path, summary);

    for (const ExperimentResult* r : ordered) {
        const fs::path dir =
            fs::path(out_dir) / ("experiment_" + std::to_string(r->config_id));
        fs::create_directories(dir, ec);
        if (ec) throw DataError("cannot create " + dir.string());
        write_predictions(*r, (dir / "predictions.csv").string());
        write_meta(*r, (dir / "meta.json").string());
        write_dataset_meta(*r, (dir / "dataset.meta.json").string());
        std::ofstream svg(dir / "plot.svg");
        if (!svg) throw DataError("cannot write plot for experiment " +
                                  std::to_string(r->config_id));
        svg << render_plot(*r);
    }
    return summary_path;
}

}  // namespace sentiforge::runner
