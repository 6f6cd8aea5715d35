#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapemine/abstraction.hpp"
#include "shapemine/learner.hpp"
#include "shapemine/lse.hpp"
#include "shapemine/matcher.hpp"
#include "shapemine/regexgen.hpp"
#include "shapemine/segmentation.hpp"
#include "shapemine/signal.hpp"

namespace shapemine {

struct MineConfig {
    std::filesystem::path input;
    TraceFormat format = TraceFormat::UcrTsv;
    double period = 1.0;
    double max_mse = 0.05;         // segmentation MSE cap (eps_max)
    double wcss_threshold = 10.0;  // WCSS-derivative threshold for the cluster count
    std::size_t k_max = 10;
    std::uint64_t seed = 0;
    std::string label_filter;      // keep only traces with this class label (empty = all)
};

struct MineTimings {
    double segmentation_s = 0.0;
    double clustering_s = 0.0;
    double learning_s = 0.0;
    double total_s = 0.0;
};

struct MineReport {
    MineConfig config;
    std::vector<Signal> traces;
    std::vector<Segmentation> segmentations;
    std::vector<double> wcss_by_k;
    std::size_t cluster_count = 0;
    Alphabet alphabet;
    Dfa dfa;
    RegexPtr shape;
    Lse lse;
    std::string lse_text;
    MineTimings timings;

    // Versioned machine-readable report ("schema": 1). Identical for
    // identical inputs, config and seed, except for the timings block.
    nlohmann::ordered_json to_json() const;
};

// The full mining pipeline: segment each trace, featurize, pick the cluster
// count, cluster, build the alphabet, learn a DFA, translate it to a regex
// and attach the letter cubes as constraints.
MineReport mine(std::vector<Signal> traces, const MineConfig& config);

// Loads `config.input`, applies the label filter, and mines.
MineReport mine_file(const MineConfig& config);

std::vector<Signal> filter_by_label(std::vector<Signal> traces, const std::string& label);

// Plot data for one segmented trace: "t,value,fit" rows, one per sample
// (boundary samples use the earlier segment's line).
void write_plot_csv(const Signal& sig, const Segmentation& seg, std::ostream& out);

// One CSV per trace under `dir`, named <trace-index>_<trace-id>.csv.
void write_plot_csvs(const MineReport& report, const std::filesystem::path& dir);

// Per-segment rows "first,last,slope,offset,duration,mse" for the segment
// subcommand and the fixtures.
void write_segments_csv(const Segmentation& seg, std::ostream& out);

} // namespace shapemine
