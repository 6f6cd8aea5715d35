#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace shapemine {

struct Sample {
    double t = 0.0;
    double v = 0.0;
};

// A finite sequence of (time, value) samples with strictly increasing
// timestamps. Immutable after construction.
class Signal {
public:
    Signal() = default;
    // Throws std::invalid_argument if timestamps are not strictly increasing.
    Signal(std::string id, std::vector<Sample> samples, std::string label = {});

    const std::string& id() const { return id_; }
    const std::string& label() const { return label_; }
    const std::vector<Sample>& samples() const { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    // t_last - t_first; 0 for signals with fewer than two samples.
    double duration() const;

private:
    std::string id_;
    std::string label_;
    std::vector<Sample> samples_;
};

// Straight-line fit of one sample range. `offset` is the fitted value at the
// range's first timestamp, so it is invariant under time translation.
struct LineFit {
    double slope = 0.0;
    double offset = 0.0;
    double duration = 0.0;
    double mse = 0.0;
};

// Cumulative sums of t, t^2, v, v^2 and t*v over sample index. Any range
// statistic is a difference of two entries, giving O(1) least-squares
// queries after O(n) setup. Immutable after construction.
class PrefixSums {
public:
    explicit PrefixSums(const Signal& sig);

    struct RangeSums {
        std::size_t n;
        double t, t2, v, v2, tv;
    };

    // Sums over the inclusive sample range [first, last].
    RangeSums range(std::size_t first, std::size_t last) const;
    std::size_t size() const { return t_.size() - 1; }

private:
    std::vector<double> t_, t2_, v_, v2_, tv_;
};

// Ordinary least squares over the inclusive sample range [first, last], with
// times shifted so the range starts at 0. Single-sample ranges fit
// slope 0, offset v, mse 0. O(1) given the prefix sums.
// Throws std::invalid_argument if first > last or last is out of range.
LineFit line_fit(const Signal& sig, std::size_t first, std::size_t last, const PrefixSums& ps);

enum class TraceFormat {
    UcrTsv, // whitespace-separated, first field = class label, one trace per line
    Csv,    // comma-separated values, optional header row, one trace per line
};

// Loads every trace in `path`. Timestamps are synthesized as i*period since
// neither format carries a time column. Throws ParseError on malformed input
// (naming row and column) and on empty files.
std::vector<Signal> load_traces(const std::filesystem::path& path, TraceFormat format,
                                double period = 1.0);

} // namespace shapemine
