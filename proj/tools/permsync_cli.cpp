#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "permsync/permsync.h"

namespace {

struct MatchingsDeleter {
    void operator()(ps_matchings* w) const { ps_matchings_free(w); }
};
struct UniverseDeleter {
    void operator()(ps_universe* u) const { ps_universe_free(u); }
};
using MatchingsPtr = std::unique_ptr<ps_matchings, MatchingsDeleter>;
using UniversePtr = std::unique_ptr<ps_universe, UniverseDeleter>;

int exit_code(ps_status status) {
    switch (status) {
        case PS_OK: return 0;
        case PS_ERR_PARSE:
        case PS_ERR_IO: return 1;
        case PS_ERR_INVALID_ARGUMENT:
        case PS_ERR_VALIDATION: return 2;
        case PS_ERR_SOLVER: return 3;
    }
    return 2;
}

int report_failure(ps_status status) {
    std::fprintf(stderr, "error: %s\n", ps_last_error());
    return exit_code(status);
}

struct SyncArgs {
    std::string input;
    std::string output;
    std::string report_path;
    std::string gt_path;
    std::string method = "nmfsync";
    int d = 0;
    double theta = 0.0;
    double tau = 0.5;
    unsigned long long seed = 0;
};

int run_sync(const SyncArgs& args) {
    ps_matchings* raw = nullptr;
    ps_status status = ps_matchings_load(args.input.c_str(), &raw);
    if (status != PS_OK) return report_failure(status);
    MatchingsPtr input(raw);

    ps_matchings* out_raw = nullptr;
    ps_universe* u_raw = nullptr;
    ps_report report{};
    status = ps_sync(input.get(), args.method.c_str(), args.d, args.theta, args.tau, args.seed,
                     &out_raw, &u_raw, &report);
    if (status != PS_OK) return report_failure(status);
    MatchingsPtr output(out_raw);
    UniversePtr universe(u_raw);

    status = ps_matchings_save(output.get(), args.output.c_str());
    if (status != PS_OK) return report_failure(status);

    if (!args.report_path.empty()) {
        nlohmann::json doc;
        doc["method"] = args.method;
        doc["d"] = args.d;
        doc["theta"] = args.theta;
        if (args.method == "matcheig") doc["tau"] = args.tau;
        doc["cycleError"] = report.cycle_error;
        doc["numMatchings"] = report.num_matchings;
        doc["wallTimes"] = {{"eig", report.t_eig},
                            {"rotation", report.t_rotation},
                            {"nmf", report.t_nmf},
                            {"project", report.t_project},
                            {"total", report.t_total}};
        if (args.method == "nmfsync") {
            doc["nmfIterations"] = report.nmf_iterations;
            doc["objectiveInitial"] = report.objective_initial;
            doc["objectiveFinal"] = report.objective_final;
        }
        if (!args.gt_path.empty()) {
            ps_matchings* gt_raw = nullptr;
            status = ps_matchings_load(args.gt_path.c_str(), &gt_raw);
            if (status != PS_OK) return report_failure(status);
            MatchingsPtr gt(gt_raw);
            double gt_err = 0.0, precision = 0.0, recall = 0.0, fscore = 0.0;
            long long matched = 0;
            status = ps_gt_error(output.get(), gt.get(), &gt_err);
            if (status != PS_OK) return report_failure(status);
            status = ps_pr_f(output.get(), gt.get(), &precision, &recall, &fscore, &matched);
            if (status != PS_OK) return report_failure(status);
            doc["gtError"] = gt_err;
            doc["precision"] = precision;
            doc["recall"] = recall;
            doc["fscore"] = fscore;
        }
        std::ofstream file(args.report_path);
        if (!file) {
            std::fprintf(stderr, "error: cannot open '%s' for writing\n",
                         args.report_path.c_str());
            return 1;
        }
        file << doc.dump(2) << "\n";
        if (!file.flush()) {
            std::fprintf(stderr, "error: failed writing '%s'\n", args.report_path.c_str());
            return 1;
        }
    }
    return 0;
}

struct GenArgs {
    int k = 0;
    int d = 0;
    double rho = 1.0;
    double sigma = 0.0;
    unsigned long long seed = 0;
    std::string output;
    std::string gt_path;
};

int run_gen(const GenArgs& args) {
    ps_matchings* w_raw = nullptr;
    ps_matchings* gt_raw = nullptr;
    ps_status status =
        ps_generate(args.k, args.d, args.rho, args.sigma, args.seed, &w_raw, &gt_raw);
    if (status != PS_OK) {
        std::fprintf(stderr, "error: %s\n", ps_last_error());
        // Bad generator parameters are a usage problem, like a malformed flag.
        return status == PS_ERR_INVALID_ARGUMENT ? 1 : exit_code(status);
    }
    MatchingsPtr w(w_raw);
    MatchingsPtr gt(gt_raw);

    status = ps_matchings_save(w.get(), args.output.c_str());
    if (status != PS_OK) return report_failure(status);
    if (!args.gt_path.empty()) {
        status = ps_matchings_save(gt.get(), args.gt_path.c_str());
        if (status != PS_OK) return report_failure(status);
    }
    return 0;
}

// ---- bench ----

struct CsvRow {
    std::string sweep;
    double value = 0.0;
    std::string method;
    std::string metric;
    double mean = 0.0;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {  // header
            first = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream fields_in(line);
        std::string field;
        while (std::getline(fields_in, field, ',')) fields.push_back(field);
        if (fields.size() < 7) continue;
        CsvRow row;
        row.sweep = fields[0];
        row.value = std::stod(fields[1]);
        row.method = fields[2];
        row.metric = fields[3];
        row.mean = std::stod(fields[4]);
        rows.push_back(row);
    }
    return rows;
}

std::string format_tick(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

/// One panel per metric, one polyline per method, shared x axis (the swept
/// parameter). Kept free of any dependency: plain shapes and text.
std::string render_svg(const std::vector<CsvRow>& rows) {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b"};
    std::vector<std::string> metrics;
    std::vector<std::string> methods;
    std::string sweep = "value";
    for (const CsvRow& row : rows) {
        if (row.metric == "failed_trials") continue;
        sweep = row.sweep;
        if (std::find(metrics.begin(), metrics.end(), row.metric) == metrics.end()) {
            metrics.push_back(row.metric);
        }
        if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
            methods.push_back(row.method);
        }
    }

    const int panel_w = 440, panel_h = 300, margin_l = 70, margin_b = 50, margin_t = 40,
              margin_r = 20, gap = 30, legend_h = 30;
    const int columns = metrics.size() > 1 ? 2 : 1;
    const int rows_n = (static_cast<int>(metrics.size()) + columns - 1) / columns;
    const int full_w = columns * (panel_w + gap) - gap + 20;
    const int full_h = rows_n * (panel_h + gap) - gap + legend_h + 20;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << full_w << "\" height=\""
        << full_h << "\" viewBox=\"0 0 " << full_w << " " << full_h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < metrics.size(); ++p) {
        const std::string& metric = metrics[p];
        const int ox = 10 + static_cast<int>(p % columns) * (panel_w + gap);
        const int oy = 10 + static_cast<int>(p / columns) * (panel_h + gap);
        const int plot_x = ox + margin_l, plot_y = oy + margin_t;
        const int plot_w = panel_w - margin_l - margin_r, plot_h = panel_h - margin_t - margin_b;

        double x_min = 0, x_max = 0, y_max = 0;
        bool any = false;
        for (const CsvRow& row : rows) {
            if (row.metric != metric) continue;
            if (!any) {
                x_min = x_max = row.value;
                any = true;
            }
            x_min = std::min(x_min, row.value);
            x_max = std::max(x_max, row.value);
            y_max = std::max(y_max, row.mean);
        }
        if (x_max == x_min) x_max = x_min + 1;
        if (y_max <= 0) y_max = 1;
        y_max *= 1.05;

        auto sx = [&](double v) { return plot_x + (v - x_min) / (x_max - x_min) * plot_w; };
        auto sy = [&](double v) { return plot_y + plot_h - v / y_max * plot_h; };

        svg << "<text x=\"" << ox + panel_w / 2 << "\" y=\"" << oy + 22
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" << metric
            << "</text>\n";
        svg << "<rect x=\"" << plot_x << "\" y=\"" << plot_y << "\" width=\"" << plot_w
            << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";
        for (int t = 0; t <= 4; ++t) {
            const double xv = x_min + (x_max - x_min) * t / 4.0;
            const double yv = y_max * t / 4.0;
            svg << "<text x=\"" << sx(xv) << "\" y=\"" << plot_y + plot_h + 18
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
                << format_tick(xv) << "</text>\n";
            svg << "<text x=\"" << plot_x - 6 << "\" y=\"" << sy(yv) + 4
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
                << format_tick(yv) << "</text>\n";
            if (t > 0) {
                svg << "<line x1=\"" << plot_x << "\" y1=\"" << sy(yv) << "\" x2=\""
                    << plot_x + plot_w << "\" y2=\"" << sy(yv)
                    << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
            }
        }
        svg << "<text x=\"" << plot_x + plot_w / 2 << "\" y=\"" << plot_y + plot_h + 38
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << sweep
            << "</text>\n";

        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            std::map<double, double> series;
            for (const CsvRow& row : rows) {
                if (row.metric == metric && row.method == methods[mi]) {
                    series[row.value] = row.mean;
                }
            }
            if (series.empty()) continue;
            svg << "<polyline fill=\"none\" stroke=\"" << kPalette[mi % 6]
                << "\" stroke-width=\"2\" points=\"";
            for (const auto& [x, y] : series) svg << sx(x) << "," << sy(y) << " ";
            svg << "\"/>\n";
            for (const auto& [x, y] : series) {
                svg << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"3\" fill=\""
                    << kPalette[mi % 6] << "\"/>\n";
            }
        }
    }

    int lx = 20;
    const int ly = full_h - 14;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << kPalette[mi % 6] << "\" stroke-width=\"2\"/>\n";
        lx += 30;
        svg << "<text x=\"" << lx << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << methods[mi] << "</text>\n";
        lx += 14 * static_cast<int>(methods[mi].size()) + 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

struct BenchArgs {
    std::string protocol;
    std::string out;
    std::string plot;
};

int run_bench(const BenchArgs& args) {
    std::ifstream in(args.protocol);
    if (!in) {
        std::fprintf(stderr, "error: cannot open '%s' for reading\n", args.protocol.c_str());
        return 1;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();

    char* csv_raw = nullptr;
    const ps_status status = ps_experiment_run(buffer.str().c_str(), &csv_raw);
    if (status != PS_OK) return report_failure(status);
    const std::string csv = csv_raw;
    ps_string_free(csv_raw);

    std::ofstream out(args.out);
    if (!out) {
        std::fprintf(stderr, "error: cannot open '%s' for writing\n", args.out.c_str());
        return 1;
    }
    out << csv;
    if (!out.flush()) {
        std::fprintf(stderr, "error: failed writing '%s'\n", args.out.c_str());
        return 1;
    }

    if (!args.plot.empty()) {
        std::ofstream plot(args.plot);
        if (!plot) {
            std::fprintf(stderr, "error: cannot open '%s' for writing\n", args.plot.c_str());
            return 1;
        }
        plot << render_svg(parse_csv(csv));
        if (!plot.flush()) {
            std::fprintf(stderr, "error: failed writing '%s'\n", args.plot.c_str());
            return 1;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cycle-consistent synchronisation of partial pairwise matchings"};
    app.require_subcommand(1);

    SyncArgs sync_args;
    CLI::App* sync = app.add_subcommand("sync", "Synchronise a matchings file");
    sync->add_option("--input", sync_args.input, "input .pmx file")->required();
    sync->add_option("--d", sync_args.d, "universe size estimate")->required();
    sync->add_option("--theta", sync_args.theta, "pruning threshold");
    sync->add_option("--method", sync_args.method, "nmfsync, spectral or matcheig")
        ->check(CLI::IsMember({"nmfsync", "spectral", "matcheig"}));
    sync->add_option("--output", sync_args.output, "output .pmx file")->required();
    sync->add_option("--report", sync_args.report_path, "write a JSON run report here");
    sync->add_option("--gt", sync_args.gt_path, "ground-truth .pmx for error metrics");
    sync->add_option("--tau", sync_args.tau, "matcheig rounding threshold");
    sync->add_option("--seed", sync_args.seed, "seed for randomised stages");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance");
    gen->add_option("--k", gen_args.k, "number of objects")->required();
    gen->add_option("--d", gen_args.d, "universe size")->required();
    gen->add_option("--rho", gen_args.rho, "observation rate in [0,1]")->required();
    gen->add_option("--sigma", gen_args.sigma, "error rate in [0,1]")->required();
    gen->add_option("--seed", gen_args.seed, "generator seed");
    gen->add_option("--output", gen_args.output, "output .pmx file")->required();
    gen->add_option("--gt", gen_args.gt_path, "also write the unperturbed ground truth here");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Run a benchmark sweep");
    bench->add_option("--protocol", bench_args.protocol, "protocol file (key = value lines)")
        ->required();
    bench->add_option("--out", bench_args.out, "output CSV path")->required();
    bench->add_option("--plot", bench_args.plot, "optional SVG chart path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (sync->parsed()) return run_sync(sync_args);
    if (gen->parsed()) return run_gen(gen_args);
    return run_bench(bench_args);
}
