#include "shapemine/signal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "shapemine/errors.hpp"

namespace shapemine {

Signal::Signal(std::string id, std::vector<Sample> samples, std::string label)
    : id_(std::move(id)), label_(std::move(label)), samples_(std::move(samples)) {
    for (std::size_t i = 1; i < samples_.size(); ++i) {
        if (!(samples_[i - 1].t < samples_[i].t)) {
            throw std::invalid_argument("signal '" + id_ +
                                        "': timestamps must be strictly increasing at index " +
                                        std::to_string(i));
        }
    }
}

double Signal::duration() const {
    if (samples_.size() < 2) return 0.0;
    return samples_.back().t - samples_.front().t;
}

PrefixSums::PrefixSums(const Signal& sig) {
    const auto& s = sig.samples();
    const std::size_t n = s.size();
    t_.assign(n + 1, 0.0);
    t2_.assign(n + 1, 0.0);
    v_.assign(n + 1, 0.0);
    v2_.assign(n + 1, 0.0);
    tv_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        t_[i + 1] = t_[i] + s[i].t;
        t2_[i + 1] = t2_[i] + s[i].t * s[i].t;
        v_[i + 1] = v_[i] + s[i].v;
        v2_[i + 1] = v2_[i] + s[i].v * s[i].v;
        tv_[i + 1] = tv_[i] + s[i].t * s[i].v;
    }
}

PrefixSums::RangeSums PrefixSums::range(std::size_t first, std::size_t last) const {
    RangeSums r;
    r.n = last - first + 1;
    r.t = t_[last + 1] - t_[first];
    r.t2 = t2_[last + 1] - t2_[first];
    r.v = v_[last + 1] - v_[first];
    r.v2 = v2_[last + 1] - v2_[first];
    r.tv = tv_[last + 1] - tv_[first];
    return r;
}

LineFit line_fit(const Signal& sig, std::size_t first, std::size_t last, const PrefixSums& ps) {
    if (first > last || last >= sig.size()) {
        throw std::invalid_argument("line_fit: invalid range [" + std::to_string(first) + ", " +
                                    std::to_string(last) + "] for signal of size " +
                                    std::to_string(sig.size()));
    }
    const double t0 = sig[first].t;
    LineFit fit;
    fit.duration = sig[last].t - t0;
    if (first == last) {
        fit.offset = sig[first].v;
        return fit; // degenerate single-sample range
    }
    const auto s = ps.range(first, last);
    const double n = static_cast<double>(s.n);
    // Shift times so the range starts at 0; keeps the normal equations
    // well conditioned and makes `offset` the value at the first sample.
    const double st = s.t - n * t0;
    const double st2 = s.t2 - 2.0 * t0 * s.t + n * t0 * t0;
    const double stv = s.tv - t0 * s.v;

    const double det = n * st2 - st * st; // > 0 whenever the range has >= 2 samples
    fit.slope = (n * stv - st * s.v) / det;
    fit.offset = (s.v - fit.slope * st) / n;
    double sse = s.v2 - 2.0 * fit.slope * stv - 2.0 * fit.offset * s.v + fit.slope * fit.slope * st2 +
                 2.0 * fit.slope * fit.offset * st + n * fit.offset * fit.offset;
    fit.mse = std::max(sse, 0.0) / n;
    return fit;
}

namespace {

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t row,
                  std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ParseError(path.string() + ": row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": not a finite number: '" + cell + "'",
                         row, col);
    }
    return value;
}

bool is_numeric(const std::string& cell) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    return ec == std::errc{} && ptr == cell.data() + cell.size();
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& cell : out) {
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        cell = (b == std::string::npos) ? std::string{} : cell.substr(b, e - b + 1);
    }
    return out;
}

} // namespace

std::vector<Signal> load_traces(const std::filesystem::path& path, TraceFormat format,
                                double period) {
    if (period <= 0.0) throw std::invalid_argument("load_traces: period must be > 0");
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());

    const std::string stem = path.stem().string();
    std::vector<Signal> traces;
    std::string line;
    std::size_t row = 0;
    bool maybe_header = format == TraceFormat::Csv;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;

        std::vector<std::string> cells =
            format == TraceFormat::UcrTsv ? split_ws(line) : split_csv(line);
        if (maybe_header) {
            maybe_header = false;
            const bool all_numeric = std::all_of(cells.begin(), cells.end(), is_numeric);
            if (!all_numeric) continue; // header row
        }

        std::string label;
        std::size_t first_value = 0;
        if (format == TraceFormat::UcrTsv) {
            parse_cell(cells[0], path, row, 1); // label must be numeric
            label = cells[0];
            first_value = 1;
        }
        if (cells.size() <= first_value) {
            throw ParseError(path.string() + ": row " + std::to_string(row) + ": no values", row, 0);
        }

        std::vector<Sample> samples;
        samples.reserve(cells.size() - first_value);
        for (std::size_t c = first_value; c < cells.size(); ++c) {
            const double v = parse_cell(cells[c], path, row, c + 1);
            samples.push_back({static_cast<double>(samples.size()) * period, v});
        }
        traces.emplace_back(stem + "#" + std::to_string(traces.size()), std::move(samples), label);
    }
    if (traces.empty()) throw ParseError("no traces in file: " + path.string());
    return traces;
}

} // namespace shapemine
