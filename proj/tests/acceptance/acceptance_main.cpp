// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.
//
// Criteria 1 and 7 need the UCR Wine and Fish archives, which are not
// redistributed here. Place Wine_TRAIN.tsv / Wine_TEST.tsv / Fish_TRAIN.tsv /
// Fish_TEST.tsv under fixtures/ucr/ (or point SHAPEMINE_UCR_DIR at them) to
// run those criteria against the real data; without the files they fail with
// an explanatory message. Synthetic same-scale stand-ins exercise the same
// machinery either way ("[info]" lines).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "shapemine/pipeline.hpp"

#include "../support/datasets.hpp"
#include "../support/oracles.hpp"

using namespace shapemine;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++failures;
}

void info(const std::string& detail) { std::printf("[info] %s\n", detail.c_str()); }

std::string join_word(const std::vector<std::string>& letters, const char* sep = ".") {
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) out += sep;
        out += letters[i];
    }
    return out;
}

std::string wcss_table(const std::vector<double>& wcss) {
    std::string out = "WCSS(k)=";
    for (std::size_t i = 0; i < wcss.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%.3f", i ? "," : "", wcss[i]);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// UCR data discovery
// ---------------------------------------------------------------------------

struct UcrData {
    std::vector<Signal> wine;  // 57 traces x 234 samples, one class
    std::vector<Signal> fish;  // 26 traces x 463 samples, one species
    std::string note;
    bool wine_ok = false;
    bool fish_ok = false;
};

std::vector<Signal> load_if_exists(const fs::path& p) {
    if (!fs::exists(p)) return {};
    return load_traces(p, TraceFormat::UcrTsv, 1.0);
}

// Group traces by class label, return the group matching (count, length).
std::optional<std::vector<Signal>> find_group(const std::vector<Signal>& traces,
                                              std::size_t count, std::size_t length) {
    std::map<std::string, std::vector<Signal>> by_label;
    for (const auto& t : traces) by_label[t.label()].push_back(t);
    for (auto& [label, group] : by_label) {
        if (group.size() != count) continue;
        const bool lengths_ok = std::all_of(group.begin(), group.end(),
                                            [&](const Signal& s) { return s.size() == length; });
        if (lengths_ok) return group;
    }
    return std::nullopt;
}

UcrData discover_ucr(const fs::path& fixtures) {
    UcrData data;
    fs::path dir = fixtures / "ucr";
    if (const char* env = std::getenv("SHAPEMINE_UCR_DIR")) dir = env;
    if (!fs::exists(dir)) {
        data.note = "directory " + dir.string() + " not found";
        return data;
    }
    try {
        auto wine_train = load_if_exists(dir / "Wine_TRAIN.tsv");
        auto wine_test = load_if_exists(dir / "Wine_TEST.tsv");
        auto pooled = wine_train;
        pooled.insert(pooled.end(), wine_test.begin(), wine_test.end());
        if (auto group = find_group(pooled, 57, 234)) {
            data.wine = std::move(*group);
            data.wine_ok = true;
        } else if (!pooled.empty()) {
            data.note += "Wine present but no class has 57 traces of 234 samples; ";
        } else {
            data.note += "Wine_TRAIN.tsv/Wine_TEST.tsv missing; ";
        }

        auto fish_train = load_if_exists(dir / "Fish_TRAIN.tsv");
        auto fish_test = load_if_exists(dir / "Fish_TEST.tsv");
        for (const auto* part : {&fish_train, &fish_test}) {
            if (auto group = find_group(*part, 26, 463)) {
                data.fish = std::move(*group);
                data.fish_ok = true;
                break;
            }
        }
        if (!data.fish_ok) {
            auto pooled_fish = fish_train;
            pooled_fish.insert(pooled_fish.end(), fish_test.begin(), fish_test.end());
            if (auto group = find_group(pooled_fish, 26, 463)) {
                data.fish = std::move(*group);
                data.fish_ok = true;
            } else if (!pooled_fish.empty()) {
                data.note += "Fish present but no species has 26 traces of 463 samples; ";
            } else {
                data.note += "Fish_TRAIN.tsv/Fish_TEST.tsv missing; ";
            }
        }
    } catch (const std::exception& e) {
        data.note += std::string("load error: ") + e.what();
    }
    return data;
}

MineConfig config_for(double eps) {
    MineConfig config;
    config.max_mse = eps;
    config.wcss_threshold = 10.0;
    config.k_max = 10;
    config.seed = 0;
    return config;
}

// ---------------------------------------------------------------------------
// Structural checks for the sensitivity table
// ---------------------------------------------------------------------------

bool is_pure_concat(const RegexPtr& r, std::vector<std::string>& symbols) {
    if (r->kind == RegexNode::Kind::Symbol) {
        symbols.push_back(r->symbol);
        return true;
    }
    if (r->kind == RegexNode::Kind::Concat) {
        return is_pure_concat(r->left, symbols) && is_pure_concat(r->right, symbols);
    }
    return false;
}

bool pattern_pqrsqrp(const std::vector<std::string>& w) {
    if (w.size() != 7) return false;
    const std::set<std::string> distinct(w.begin(), w.end());
    return distinct.size() == 4 && w[0] == w[6] && w[1] == w[4] && w[2] == w[5] && w[3] != w[0] &&
           w[1] != w[0] && w[2] != w[1] && w[2] != w[0];
}

// p . (q + r) with distinct letters, associativity-insensitive.
bool pattern_choice_tail(const RegexPtr& r) {
    if (r->kind != RegexNode::Kind::Concat) return false;
    if (r->left->kind != RegexNode::Kind::Symbol) return false;
    const RegexPtr& u = r->right;
    if (u->kind != RegexNode::Kind::Union) return false;
    if (u->left->kind != RegexNode::Kind::Symbol || u->right->kind != RegexNode::Kind::Symbol) {
        return false;
    }
    const std::set<std::string> distinct{r->left->symbol, u->left->symbol, u->right->symbol};
    return distinct.size() == 3;
}

struct StructureResult {
    bool pass = false;
    std::string detail;
};

StructureResult check_wine_row(const MineReport& report, double eps) {
    StructureResult res;
    std::vector<std::string> symbols;
    const bool concat = is_pure_concat(report.shape, symbols);
    const std::size_t letters = report.alphabet.letters.size();
    char buf[256];
    if (eps == 0.05) {
        res.pass = letters == 4 && concat && pattern_pqrsqrp(symbols);
        std::snprintf(buf, sizeof buf, "eps=0.05: %zu letters, shape %s", letters,
                      regex_to_string(report.shape).c_str());
        res.detail = buf;
        return res;
    }
    if (eps == 0.1) {
        const bool exact = letters == 5 && concat && symbols.size() == 6 &&
                           symbols.front() == symbols.back();
        const bool near = letters >= 4 && letters <= 6;
        res.pass = exact || near;
        std::snprintf(buf, sizeof buf, "eps=0.1: %zu letters, shape %s%s", letters,
                      regex_to_string(report.shape).c_str(),
                      exact ? "" : (near ? " (deviation recorded, within +/-1 letters)" : ""));
        res.detail = buf + (exact ? std::string{} : "; " + wcss_table(report.wcss_by_k));
        return res;
    }
    const bool exact = letters == 3 && pattern_choice_tail(report.shape);
    const bool near = letters >= 2 && letters <= 4;
    res.pass = exact || near;
    std::snprintf(buf, sizeof buf, "eps=0.5: %zu letters, shape %s%s", letters,
                  regex_to_string(report.shape).c_str(),
                  exact ? "" : (near ? " (deviation recorded, within +/-1 letters)" : ""));
    res.detail = buf + (exact ? std::string{} : "; " + wcss_table(report.wcss_by_k));
    return res;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_1_sensitivity(const UcrData& ucr) {
    // Surrogate demonstration regardless of data availability.
    {
        const auto report = mine(testdata::wine_like(), config_for(0.05));
        std::vector<std::string> symbols;
        const bool concat = is_pure_concat(report.shape, symbols);
        info("synthetic 57x234 two-peak set at eps=0.05: " +
             std::to_string(report.alphabet.letters.size()) + " letters, shape " +
             regex_to_string(report.shape) +
             (concat && pattern_pqrsqrp(symbols) ? " (p.q.r.s.q.r.p holds)" : ""));
    }
    if (!ucr.wine_ok) {
        report(1, false,
               "Wine sensitivity: UCR Wine dataset not available (" + ucr.note +
                   "); supply fixtures/ucr/Wine_TRAIN.tsv and Wine_TEST.tsv to run");
        return;
    }
    bool all = true;
    std::string detail = "Wine sensitivity (57x234, seed 0, threshold 10):";
    for (const double eps : {0.05, 0.1, 0.5}) {
        const auto run = mine(ucr.wine, config_for(eps));
        StructureResult res = check_wine_row(run, eps);
        if (eps == 0.05) {
            // The first row must match the reference structure exactly.
            std::vector<std::string> symbols;
            const bool exact = run.alphabet.letters.size() == 4 &&
                               is_pure_concat(run.shape, symbols) && pattern_pqrsqrp(symbols);
            res.pass = exact;
            if (!exact) res.detail += "; " + wcss_table(run.wcss_by_k);
        }
        all = all && res.pass;
        detail += " | " + res.detail;
    }
    report(1, all, detail);
}

void criterion_2_cost_profile(const UcrData& ucr) {
    const std::vector<Signal> traces = ucr.wine_ok ? ucr.wine : testdata::wine_like();
    const char* source = ucr.wine_ok ? "UCR Wine class subset" : "synthetic 57x234 set";
    const auto run = mine(traces, config_for(0.05));
    const auto& t = run.timings;
    const bool dominant = t.segmentation_s > 10.0 * t.clustering_s &&
                          t.segmentation_s > 10.0 * t.learning_s;
    const bool fast = t.total_s <= 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "cost profile on %s: t_s=%.4fs t_c=%.4fs t_l=%.4fs t_total=%.4fs "
                  "(t_s>10*t_c %s, t_s>10*t_l %s, total<=60s %s)",
                  source, t.segmentation_s, t.clustering_s, t.learning_s, t.total_s,
                  dominant ? "yes" : "NO", t.segmentation_s > 10.0 * t.learning_s ? "yes" : "NO",
                  fast ? "yes" : "NO");
    report(2, dominant && fast, buf);
}

void criterion_3_quadratic_scaling() {
    std::mt19937_64 rng(2024);
    const std::size_t sizes[3] = {250, 500, 1000};
    Signal signals[3] = {oracle::random_signal(rng, sizes[0], "s250"),
                         oracle::random_signal(rng, sizes[1], "s500"),
                         oracle::random_signal(rng, sizes[2], "s1000")};
    auto run_once = [](const Signal& sig) {
        const auto start = std::chrono::steady_clock::now();
        const auto seg = segment_min_count(sig, 0.05);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seg.segment_count() == 0) std::abort(); // keep the work observable
        return elapsed;
    };
    // Interleaved rounds so machine-load spikes hit all three sizes alike
    // instead of skewing one ratio.
    double best[3];
    for (int s = 0; s < 3; ++s) best[s] = run_once(signals[s]); // warmup round
    for (int round = 0; round < 12; ++round) {
        for (int s = 0; s < 3; ++s) best[s] = std::min(best[s], run_once(signals[s]));
    }
    const double t250 = best[0], t500 = best[1], t1000 = best[2];
    const double r1 = t500 / t250;
    const double r2 = t1000 / t500;
    const bool pass = r1 >= 2.5 && r1 <= 6.0 && r2 >= 2.5 && r2 <= 6.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "quadratic segmentation scaling: t(250)=%.4fs t(500)=%.4fs t(1000)=%.4fs, "
                  "ratios %.2f and %.2f (expected within [2.5, 6])",
                  t250, t500, t1000, r1, r2);
    report(3, pass, buf);
}

void criterion_4_segmentation_oracle() {
    std::mt19937_64 rng(4242);
    int count_mismatch = 0, objective_mismatch = 0;
    for (int round = 0; round < 500; ++round) {
        const std::size_t n = 4 + oracle::pick(rng, 9); // 4..12
        const auto sig = oracle::random_signal(rng, n);
        const double eps = oracle::uniform(rng, 0.01, 1.5);
        const auto seg = segment_min_count(sig, eps);
        const auto ref = oracle::brute_force_min_count(sig, eps);
        if (seg.segment_count() != ref.min_count) ++count_mismatch;

        const std::size_t m = 1 + oracle::pick(rng, std::min<std::size_t>(4, n - 1));
        const auto fixed = segment_fixed_count(sig, m);
        double worst = 0.0;
        for (const auto& fit : fixed.fits) worst = std::max(worst, fit.mse);
        if (std::abs(worst - oracle::brute_force_fixed_count(sig, m)) > 1e-9) {
            ++objective_mismatch;
        }
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "segmentation optimality on 500 random signals (n<=12): %d count mismatches, "
                  "%d fixed-count objective mismatches",
                  count_mismatch, objective_mismatch);
    report(4, count_mismatch == 0 && objective_mismatch == 0, buf);
}

void criterion_5_dfa_regex_equivalence() {
    std::mt19937_64 rng(555);
    const std::vector<std::string> alphabet{"A", "B", "C"};
    int mismatches = 0;
    std::string example;
    for (int round = 0; round < 200; ++round) {
        const auto dfa = oracle::random_dfa(rng, 5, 3);
        const auto regex = simplify(eliminate_states(dfa));
        if (const auto diff = oracle::language_difference(dfa, regex, alphabet, 8)) {
            ++mismatches;
            if (example.empty()) example = " (first counterexample: '" + join_word(*diff, "") + "')";
        }
    }
    report(5, mismatches == 0,
           "DFA<->regex equivalence on 200 random DFAs, words up to length 8: " +
               std::to_string(mismatches) + " mismatches" + example);
}

void criterion_6_learner_soundness() {
    std::mt19937_64 rng(666);
    const std::vector<std::string> alphabet{"A", "B", "C"};
    int violations = 0;
    for (int round = 0; round < 200; ++round) {
        std::vector<Word> words;
        const std::size_t count = 1 + oracle::pick(rng, 8);
        for (std::size_t w = 0; w < count; ++w) {
            Word word;
            word.trace_id = std::to_string(w);
            const std::size_t len = 1 + oracle::pick(rng, 9);
            for (std::size_t i = 0; i < len; ++i) {
                word.letters.push_back(alphabet[oracle::pick(rng, alphabet.size())]);
            }
            words.push_back(std::move(word));
        }
        const auto merged = rpni_merge(build_prefix_tree(words));
        for (const auto& word : words) {
            if (!merged.accepts(word.letters)) ++violations;
        }
    }

    std::vector<Word> loop_words;
    for (const char* text : {"A", "AA", "AAA"}) {
        Word w;
        w.trace_id = text;
        for (const char* c = text; *c; ++c) w.letters.push_back(std::string(1, *c));
        loop_words.push_back(std::move(w));
    }
    const auto merged = rpni_merge(build_prefix_tree(loop_words));
    const auto shape = simplify(eliminate_states(merged));
    const auto a_plus = re::concat(re::symbol("A"), re::star(re::symbol("A")));
    const bool loop_ok =
        regex_equal(shape, a_plus) || regex_equal(shape, re::star(re::symbol("A")));
    const bool generalizes = merged.accepts({"A", "A", "A", "A", "A"});

    report(6, violations == 0 && loop_ok && generalizes,
           "learner soundness: " + std::to_string(violations) +
               " rejected training words over 200 random word-sets; {A,AA,AAA} learns " +
               regex_to_string(shape));
}

void criterion_7_round_trip(const UcrData& ucr) {
    // Surrogate demonstration at the same scale.
    {
        const auto wine_run = mine(testdata::wine_like(), config_for(0.05));
        const auto fish_run = mine(testdata::fish_like(), config_for(0.05));
        int misses = 0;
        for (const auto& t : wine_run.traces) {
            if (!noisy_match(t, wine_run.lse, 0.05).matched) ++misses;
        }
        for (const auto& t : fish_run.traces) {
            if (!noisy_match(t, fish_run.lse, 0.05).matched) ++misses;
        }
        info("synthetic round-trip: " + std::to_string(misses) + " misses over " +
             std::to_string(wine_run.traces.size() + fish_run.traces.size()) +
             " training traces");
    }
    if (!ucr.wine_ok || !ucr.fish_ok) {
        report(7, false,
               "matching round-trip: UCR Wine/Fish data not available (" + ucr.note +
                   "); supply fixtures/ucr/ to run");
        return;
    }
    int misses = 0;
    std::size_t total = 0;
    bool zero_rejected = true;
    for (const auto* traces : {&ucr.wine, &ucr.fish}) {
        const auto run = mine(*traces, config_for(0.05));
        for (const auto& t : run.traces) {
            ++total;
            if (!noisy_match(t, run.lse, 0.05).matched) ++misses;
        }
        std::vector<Sample> zeros;
        for (std::size_t i = 0; i < (*traces)[0].size(); ++i) {
            zeros.push_back({static_cast<double>(i), 0.0});
        }
        if (noisy_match(Signal("zero", zeros), run.lse, 0.0).matched) zero_rejected = false;
    }
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "matching round-trip on Wine+Fish: %d misses over %zu training traces; "
                  "constant-zero trace rejected at nu=0: %s",
                  misses, total, zero_rejected ? "yes" : "NO");
    report(7, misses == 0 && zero_rejected, buf);
}

void criterion_8_matcher_properties() {
    std::mt19937_64 rng(888);
    int monotonicity_violations = 0, witness_violations = 0, matched = 0;

    auto random_lse_for = [&](const Signal& sig) {
        const std::size_t pieces = 1 + oracle::pick(rng, 3);
        std::vector<std::size_t> cuts{0};
        for (std::size_t k = 1; k < pieces; ++k) cuts.push_back(1 + oracle::pick(rng, sig.size() - 2));
        cuts.push_back(sig.size() - 1);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        const PrefixSums ps(sig);
        Lse lse;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const LineFit fit = line_fit(sig, cuts[k], cuts[k + 1], ps);
            const std::string idx = std::to_string(k);
            LseAtom atom{"s" + idx, "a" + idx, "b" + idx, "d" + idx};
            const double pad = oracle::uniform(rng, 0.005, 0.6);
            lse.constraints.emplace_back(atom.slope_param,
                                         Interval{fit.slope - pad, fit.slope + pad});
            lse.constraints.emplace_back(atom.offset_param,
                                         Interval{fit.offset - pad, fit.offset + pad});
            lse.constraints.emplace_back(atom.duration_param,
                                         Interval{fit.duration - 0.25, fit.duration + 0.25});
            const auto sym = re::symbol(atom.name);
            lse.atoms.push_back(atom);
            lse.shape = lse.shape ? re::concat(lse.shape, sym) : sym;
        }
        return lse;
    };

    for (int round = 0; round < 200; ++round) {
        const auto sig = oracle::random_signal(rng, 6 + oracle::pick(rng, 14));
        const auto lse = random_lse_for(sig);
        const double nu = oracle::uniform(rng, 0.0, 0.25);
        const auto result = noisy_match(sig, lse, nu);
        if (!result.matched) continue;
        ++matched;
        for (const double wider : {nu * 2 + 0.01, nu * 10 + 0.1}) {
            if (!noisy_match(sig, lse, wider).matched) ++monotonicity_violations;
        }
        // Witness re-verification from scratch.
        if (result.segments.front().first != 0 ||
            result.segments.back().last != sig.size() - 1) {
            ++witness_violations;
        }
        for (std::size_t k = 0; k < result.segments.size(); ++k) {
            const auto& seg = result.segments[k];
            if (k > 0 && result.segments[k - 1].last != seg.first) ++witness_violations;
            const LseAtom* atom = lse.find_atom(seg.atom);
            if (!atom) {
                ++witness_violations;
                continue;
            }
            const auto check_in = [&](const std::string& param, double value) {
                const auto iv = lse.param_interval(param);
                if (iv && !iv->contains(value)) ++witness_violations;
            };
            check_in(atom->slope_param, seg.slope);
            check_in(atom->offset_param, seg.offset);
            check_in(atom->duration_param, seg.duration);
            if (oracle::direct_mse(sig, seg.first, seg.last, seg.slope, seg.offset) > nu + 1e-12) {
                ++witness_violations;
            }
        }
    }

    std::mt19937_64 rng2(889);
    int fit_mismatches = 0;
    for (int round = 0; round < 100; ++round) {
        const auto sig = oracle::random_signal(rng2, 4 + oracle::pick(rng2, 10));
        const PrefixSums ps(sig);
        const double a0 = oracle::uniform(rng2, -2, 1);
        const double b0 = oracle::uniform(rng2, -2, 1);
        const Interval abox{a0, a0 + oracle::uniform(rng2, 0.1, 2.0)};
        const Interval bbox{b0, b0 + oracle::uniform(rng2, 0.1, 2.0)};
        const auto fit = constrained_line_fit(sig, ps, 0, sig.size() - 1, abox, bbox);
        const auto grid = oracle::grid_least_squares(sig, 0, sig.size() - 1, abox.lo, abox.hi,
                                                     bbox.lo, bbox.hi);
        if (fit.mse > grid.mse + 1e-9 || std::abs(fit.mse - grid.mse) > 1e-4 * (1.0 + grid.mse)) {
            ++fit_mismatches;
        }
    }

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "matcher properties: %d monotonicity and %d witness violations over 200 "
                  "instances (%d matched); constrained fit vs grid: %d mismatches over 100",
                  monotonicity_violations, witness_violations, matched, fit_mismatches);
    report(8, monotonicity_violations == 0 && witness_violations == 0 && matched >= 20 &&
                  fit_mismatches == 0,
           buf);
}

} // namespace

int main(int argc, char** argv) {
    fs::path fixtures = "fixtures";
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::string(argv[i]) == "--fixtures") fixtures = argv[i + 1];
    }

    const UcrData ucr = discover_ucr(fixtures);
    if (ucr.wine_ok) info("UCR Wine subset found: 57 traces x 234 samples");
    if (ucr.fish_ok) info("UCR Fish subset found: 26 traces x 463 samples");

    criterion_1_sensitivity(ucr);
    criterion_2_cost_profile(ucr);
    criterion_3_quadratic_scaling();
    criterion_4_segmentation_oracle();
    criterion_5_dfa_regex_equivalence();
    criterion_6_learner_soundness();
    criterion_7_round_trip(ucr);
    criterion_8_matcher_properties();

    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
