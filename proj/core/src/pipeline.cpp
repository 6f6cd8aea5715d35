#include "shapemine/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace shapemine {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_name(TraceFormat format) {
    return format == TraceFormat::UcrTsv ? "ucr-tsv" : "csv";
}

} // namespace

std::vector<Signal> filter_by_label(std::vector<Signal> traces, const std::string& label) {
    if (label.empty()) return traces;
    std::erase_if(traces, [&](const Signal& s) { return s.label() != label; });
    return traces;
}

MineReport mine(std::vector<Signal> traces, const MineConfig& config) {
    if (traces.empty()) throw std::invalid_argument("mine: no traces");
    if (!(config.max_mse > 0.0)) throw std::invalid_argument("mine: max_mse must be > 0");
    if (!(config.wcss_threshold > 0.0)) {
        throw std::invalid_argument("mine: wcss_threshold must be > 0");
    }
    if (config.k_max == 0) throw std::invalid_argument("mine: k_max must be >= 1");

    const auto t_start = Clock::now();
    MineReport report;
    report.config = config;
    report.traces = std::move(traces);

    const auto t_seg = Clock::now();
    report.segmentations.reserve(report.traces.size());
    for (const auto& trace : report.traces) {
        report.segmentations.push_back(segment_min_count(trace, config.max_mse));
    }
    report.timings.segmentation_s = seconds_since(t_seg);

    const auto t_cluster = Clock::now();
    const auto points = featurize(report.segmentations);
    const std::size_t k_max = std::min(config.k_max, points.size());
    const auto choice = choose_cluster_count(points, config.wcss_threshold, k_max, config.seed);
    report.wcss_by_k = choice.wcss_by_k;
    report.cluster_count = choice.k;
    const auto& clustering = choice.clustering;
    std::vector<std::string> ids;
    ids.reserve(report.traces.size());
    for (const auto& trace : report.traces) ids.push_back(trace.id());
    report.alphabet = build_alphabet(points, clustering.assignment, ids);
    report.timings.clustering_s = seconds_since(t_cluster);

    const auto t_learn = Clock::now();
    const Dfa pta = build_prefix_tree(report.alphabet.words);
    report.dfa = rpni_merge(pta);
    report.shape = simplify(eliminate_states(report.dfa));
    report.lse = attach_constraints(report.shape, report.alphabet.letters);
    report.lse_text = render_lse(report.lse);
    report.timings.learning_s = seconds_since(t_learn);

    report.timings.total_s = seconds_since(t_start);
    return report;
}

MineReport mine_file(const MineConfig& config) {
    auto traces = filter_by_label(load_traces(config.input, config.format, config.period),
                                  config.label_filter);
    if (traces.empty()) {
        throw std::runtime_error("mine: no traces with label '" + config.label_filter + "' in " +
                                 config.input.string());
    }
    return mine(std::move(traces), config);
}

nlohmann::ordered_json MineReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["config"] = {
        {"input", config.input.string()},
        {"format", format_name(config.format)},
        {"period", config.period},
        {"max_mse", config.max_mse},
        {"wcss_threshold", config.wcss_threshold},
        {"k_max", config.k_max},
        {"seed", config.seed},
        {"label_filter", config.label_filter},
    };
    j["lse"] = lse_text;
    j["regex"] = regex_to_string(shape);
    j["regex_ast"] = regex_to_json(shape);
    j["cluster_count"] = cluster_count;
    j["wcss"] = wcss_by_k;
    j["alphabet"] = nlohmann::ordered_json::array();
    for (const auto& letter : alphabet.letters) {
        j["alphabet"].push_back({
            {"letter", letter.name},
            {"slope", {letter.slope_range.lo, letter.slope_range.hi}},
            {"offset", {letter.offset_range.lo, letter.offset_range.hi}},
            {"duration", {letter.duration_range.lo, letter.duration_range.hi}},
            {"members", letter.member_count},
        });
    }
    j["words"] = nlohmann::ordered_json::array();
    for (const auto& word : alphabet.words) {
        j["words"].push_back({{"trace", word.trace_id}, {"letters", word.letters}});
    }
    j["dfa"] = dfa.to_json();
    j["trace_count"] = traces.size();
    std::size_t segments = 0;
    for (const auto& seg : segmentations) segments += seg.segment_count();
    j["segment_count"] = segments;
    j["timings"] = {
        {"segmentation_s", timings.segmentation_s},
        {"clustering_s", timings.clustering_s},
        {"learning_s", timings.learning_s},
        {"total_s", timings.total_s},
    };
    return j;
}

void write_plot_csv(const Signal& sig, const Segmentation& seg, std::ostream& out) {
    out << "t,value,fit\n";
    std::size_t segment = 0;
    for (std::size_t i = 0; i < sig.size(); ++i) {
        while (segment + 1 < seg.fits.size() && i > seg.cuts[segment + 1]) ++segment;
        const LineFit& fit = seg.fits[segment];
        const double fitted = fit.slope * (sig[i].t - sig[seg.cuts[segment]].t) + fit.offset;
        out << format_number(sig[i].t) << ',' << format_number(sig[i].v) << ','
            << format_number(fitted) << '\n';
    }
}

void write_plot_csvs(const MineReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < report.traces.size(); ++i) {
        std::string id = report.traces[i].id();
        std::replace_if(id.begin(), id.end(), [](char c) { return c == '/' || c == '#'; }, '_');
        std::ofstream out(dir / (std::to_string(i) + "_" + id + ".csv"));
        if (!out) throw std::runtime_error("cannot write plot csv in " + dir.string());
        write_plot_csv(report.traces[i], report.segmentations[i], out);
    }
}

void write_segments_csv(const Segmentation& seg, std::ostream& out) {
    out << "first,last,slope,offset,duration,mse\n";
    for (std::size_t k = 0; k < seg.fits.size(); ++k) {
        const LineFit& fit = seg.fits[k];
        out << seg.cuts[k] << ',' << seg.cuts[k + 1] << ',' << format_number(fit.slope) << ','
            << format_number(fit.offset) << ',' << format_number(fit.duration) << ','
            << format_number(fit.mse) << '\n';
    }
}

} // namespace shapemine
