// shapemine - mine linear shape expressions from time series and check
// signals against them.
//
// Subcommands:
//   mine     learn an LSE from a set of traces, write a JSON report
//   match    decide whether a trace noisy-matches an LSE file
//   segment  piecewise-linear approximation of a single trace
//
// Exit codes: 0 success (match: matched), 1 failure (match: no match),
// 2 usage or input errors. SHAPEMINE_LOG=debug|info|quiet controls stderr
// verbosity.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "shapemine/errors.hpp"
#include "shapemine/pipeline.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("SHAPEMINE_LOG");
    if (!env) return 1;
    const std::string v = env;
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "shapemine: " << msg << "\n";
}

void debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "shapemine[debug]: " << msg << "\n";
}

shapemine::TraceFormat parse_format(const std::string& name) {
    if (name == "ucr-tsv") return shapemine::TraceFormat::UcrTsv;
    if (name == "csv") return shapemine::TraceFormat::Csv;
    throw CLI::ValidationError("--format", "must be 'ucr-tsv' or 'csv'");
}

shapemine::Signal load_single_trace(const std::string& path, const std::string& format,
                                    double period) {
    auto traces = shapemine::load_traces(path, parse_format(format), period);
    if (traces.size() != 1) {
        info("file has " + std::to_string(traces.size()) + " traces; using the first");
    }
    return traces.front();
}

int run_mine(const shapemine::MineConfig& config, const std::string& out_path,
             const std::string& plot_dir) {
    const auto report = shapemine::mine_file(config);
    debug("segmented " + std::to_string(report.traces.size()) + " traces into " +
          std::to_string(report.alphabet.words.size()) + " words");

    const auto json = report.to_json();
    if (out_path.empty() || out_path == "-") {
        std::cout << json.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << json.dump(2) << "\n";
        info("report written to " + out_path);
    }
    if (!plot_dir.empty()) {
        shapemine::write_plot_csvs(report, plot_dir);
        info("plot data written to " + plot_dir);
    }
    std::cout << report.lse_text << "\n";
    return 0;
}

int run_match(const std::string& lse_path, const std::string& trace_path, double nu,
              const std::string& format, double period, const std::string& out_path) {
    std::ifstream in(lse_path);
    if (!in) throw std::runtime_error("cannot open LSE file: " + lse_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto lse = shapemine::parse_lse(buffer.str());

    const auto trace = load_single_trace(trace_path, format, period);
    const auto result = shapemine::noisy_match(trace, lse, nu);

    nlohmann::ordered_json j;
    j["matched"] = result.matched;
    j["nu"] = nu;
    j["trace"] = trace.id();
    j["segments"] = nlohmann::ordered_json::array();
    for (const auto& seg : result.segments) {
        j["segments"].push_back({
            {"first", seg.first},
            {"last", seg.last},
            {"atom", seg.atom},
            {"slope", seg.slope},
            {"offset", seg.offset},
            {"duration", seg.duration},
            {"mse", seg.mse},
        });
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << "\n";
    }
    return result.matched ? 0 : 1;
}

int run_segment(const std::string& trace_path, double max_mse, std::size_t count,
                const std::string& format, double period) {
    const auto trace = load_single_trace(trace_path, format, period);
    const auto seg = count > 0 ? shapemine::segment_fixed_count(trace, count)
                               : shapemine::segment_min_count(trace, max_mse);
    shapemine::write_segments_csv(seg, std::cout);
    info(std::to_string(seg.segment_count()) + " segments");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mine linear shape expressions from time series and match signals against them"};
    app.require_subcommand(1);

    shapemine::MineConfig config;
    std::string mine_input, mine_format = "ucr-tsv", mine_out, plot_dir, label;
    auto* mine = app.add_subcommand("mine", "Learn an LSE from a set of traces");
    mine->add_option("--input", mine_input, "Trace file")->required();
    mine->add_option("--format", mine_format, "Input format: ucr-tsv or csv (default ucr-tsv)");
    mine->add_option("--period", config.period, "Sampling period in seconds (default 1.0)");
    mine->add_option("--max-mse", config.max_mse, "Segmentation MSE cap (eps)")->required();
    mine->add_option("--wcss-threshold", config.wcss_threshold,
                     "WCSS-derivative threshold for the cluster count (default 10)");
    mine->add_option("--kmax", config.k_max, "Maximum cluster count to consider (default 10)");
    mine->add_option("--seed", config.seed, "Clustering seed (default 0)");
    mine->add_option("--label", label, "Keep only traces with this class label (ucr-tsv)");
    mine->add_option("--out", mine_out, "Report JSON path ('-' for stdout)");
    mine->add_option("--plot-dir", plot_dir, "Directory for per-trace plot CSVs");

    std::string match_lse, match_trace, match_format = "csv", match_out;
    double nu = 0.0, match_period = 1.0;
    auto* match = app.add_subcommand("match", "Check a trace against an LSE file");
    match->add_option("--lse", match_lse, "LSE text file")->required();
    match->add_option("--trace", match_trace, "Trace file")->required();
    match->add_option("--nu", nu, "Noise tolerance (default 0)");
    match->add_option("--format", match_format, "Trace format: csv or ucr-tsv (default csv)");
    match->add_option("--period", match_period, "Sampling period in seconds (default 1.0)");
    match->add_option("--out", match_out, "Witness JSON path ('-' for stdout)");

    std::string seg_trace, seg_format = "csv";
    double seg_max_mse = 0.0, seg_period = 1.0;
    std::size_t seg_count = 0;
    auto* segment = app.add_subcommand("segment", "Piecewise-linear approximation of one trace");
    segment->add_option("--trace", seg_trace, "Trace file")->required();
    auto* opt_eps = segment->add_option("--max-mse", seg_max_mse, "Per-segment MSE cap");
    auto* opt_count = segment->add_option("--count", seg_count, "Exact segment count");
    opt_eps->excludes(opt_count);
    opt_count->excludes(opt_eps);
    segment->add_option("--format", seg_format, "Trace format: csv or ucr-tsv (default csv)");
    segment->add_option("--period", seg_period, "Sampling period in seconds (default 1.0)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (mine->parsed()) {
            config.input = mine_input;
            config.format = parse_format(mine_format);
            config.label_filter = label;
            return run_mine(config, mine_out, plot_dir);
        }
        if (match->parsed()) {
            return run_match(match_lse, match_trace, nu, match_format, match_period, match_out);
        }
        if (segment->parsed()) {
            if ((seg_max_mse > 0.0) == (seg_count > 0)) {
                std::cerr << "shapemine segment: exactly one of --max-mse/--count required\n";
                return 2;
            }
            return run_segment(seg_trace, seg_max_mse, seg_count, seg_format, seg_period);
        }
    } catch (const shapemine::ParseError& e) {
        std::cerr << "shapemine: parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "shapemine: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
