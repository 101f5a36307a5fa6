#pragma once

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dsom/cluster.hpp"
#include "dsom/errors.hpp"
#include "dsom/fitness.hpp"
#include "dsom/generator.hpp"
#include "dsom/rng.hpp"
#include "dsom/schedulers.hpp"

namespace dsom {

/// Shortest round-trip decimal form; what every CSV cell uses, so emitted
/// files are byte-stable and parse back to the exact same doubles.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// One benchmark measurement: one algorithm on one generated scenario.
/// All metric fields are recomputed by the harness from the returned
/// placement, never taken from the scheduler.
struct MetricsRecord {
    std::string scenario;
    std::string algorithm;
    std::uint64_t seed = 0;
    int machines_used = 0;
    double avg_utilization = 0.0;
    double comm_cost = 0.0;
    double fitness_total = 0.0;
    double wall_time_s = 0.0;

    bool operator==(const MetricsRecord&) const = default;
};

struct ExperimentPlan {
    std::vector<ScaleConfig> scales;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    FitnessWeights weights;
    GAParams ga_params;
    int jobs = 1;
    bool record_wall_time = true;  // false writes 0 so reruns are byte-identical
};

/// Runs every algorithm on every (scale, seed) cell. Each cell generates its
/// scenario once and all algorithms place that same object; the GA folds the
/// scenario seed into its own so cells are decorrelated but reproducible.
/// Cells run on `jobs` worker threads; the record order is always
/// scale-major, then seed, then algorithm.
inline std::vector<MetricsRecord> run_experiment(const ExperimentPlan& plan) {
    if (plan.scales.empty() || plan.algorithms.empty() || plan.seeds.empty())
        throw StructuralError("experiment needs at least one scale, algorithm and seed");
    validate(plan.weights);
    validate(plan.ga_params);

    struct Cell {
        std::size_t scale;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < plan.scales.size(); ++s) {
        for (std::uint64_t seed : plan.seeds) cells.push_back({s, seed});
    }

    const std::size_t algos = plan.algorithms.size();
    std::vector<MetricsRecord> records(cells.size() * algos);
    std::vector<std::string> failures(cells.size());

    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const ScaleConfig& config = plan.scales[cell.scale];
        try {
            const Scenario scn = generate_scenario(config, cell.seed);
            for (std::size_t a = 0; a < algos; ++a) {
                GAParams ga = plan.ga_params;
                ga.seed = mix_seed(ga.seed, cell.seed);
                const auto t0 = std::chrono::steady_clock::now();
                const Placement placement = run_scheduler(scn, plan.algorithms[a], plan.weights, ga);
                const auto t1 = std::chrono::steady_clock::now();
                if (!is_feasible(scn, placement))
                    throw Error(std::string(to_string(plan.algorithms[a])) +
                                " returned an infeasible placement");
                const auto loads = machine_loads(scn, placement);
                MetricsRecord rec;
                rec.scenario = scn.name;
                rec.algorithm = to_string(plan.algorithms[a]);
                rec.seed = cell.seed;
                rec.machines_used = active_machine_count(scn, placement);
                rec.avg_utilization = mean_active_load(loads);
                rec.comm_cost = comm_cost(scn, placement);
                rec.fitness_total = fitness(scn, placement, plan.weights).total;
                rec.wall_time_s = plan.record_wall_time
                                      ? std::chrono::duration<double>(t1 - t0).count()
                                      : 0.0;
                records[ci * algos + a] = std::move(rec);
            }
        } catch (const std::exception& e) {
            failures[ci] = config.name + " seed " + std::to_string(cell.seed) + ": " + e.what();
        }
    };

    const int workers = std::max(1, std::min<int>(plan.jobs, static_cast<int>(cells.size())));
    if (workers == 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t ci = next.fetch_add(1); ci < cells.size(); ci = next.fetch_add(1))
                    run_cell(ci);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& f : failures) {
        if (!f.empty()) throw Error("experiment cell failed: " + f);
    }
    return records;
}

inline constexpr const char* kRawCsvHeader =
    "scenario,algorithm,seed,machines_used,avg_utilization,comm_cost,fitness,wall_time_s";

inline std::string raw_results_csv(const std::vector<MetricsRecord>& records) {
    std::string out(kRawCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += r.scenario;
        out += ',';
        out += r.algorithm;
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += std::to_string(r.machines_used);
        out += ',';
        out += format_double(r.avg_utilization);
        out += ',';
        out += format_double(r.comm_cost);
        out += ',';
        out += format_double(r.fitness_total);
        out += ',';
        out += format_double(r.wall_time_s);
        out += '\n';
    }
    return out;
}

inline std::vector<MetricsRecord> parse_raw_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kRawCsvHeader)
        throw StructuralError("raw results CSV has an unexpected header");
    std::vector<MetricsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        MetricsRecord r;
        std::getline(row, r.scenario, ',');
        std::getline(row, r.algorithm, ',');
        std::getline(row, field, ',');
        r.seed = std::stoull(field);
        std::getline(row, field, ',');
        r.machines_used = std::stoi(field);
        std::getline(row, field, ',');
        r.avg_utilization = std::stod(field);
        std::getline(row, field, ',');
        r.comm_cost = std::stod(field);
        std::getline(row, field, ',');
        r.fitness_total = std::stod(field);
        if (!std::getline(row, field, ','))
            throw StructuralError("raw results CSV row is missing fields");
        r.wall_time_s = std::stod(field);
        records.push_back(std::move(r));
    }
    return records;
}

/// Five-number summary of one metric for one scenario x algorithm group.
/// Quartiles are Tukey hinges: medians of the lower and upper halves, the
/// middle element excluded when the sample count is odd.
struct SummaryRow {
    std::string scenario;
    std::string algorithm;
    int samples = 0;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

namespace detail {

inline double median_of(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    const std::size_t mid = lo + n / 2;
    return (n % 2 == 1) ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
}

} // namespace detail

template <typename MetricFn>
inline std::vector<SummaryRow> summarize_metric(const std::vector<MetricsRecord>& records,
                                                MetricFn metric) {
    std::vector<SummaryRow> rows;
    std::vector<std::vector<double>> groups;
    for (const auto& r : records) {
        std::size_t g = 0;
        for (; g < rows.size(); ++g) {
            if (rows[g].scenario == r.scenario && rows[g].algorithm == r.algorithm) break;
        }
        if (g == rows.size()) {
            rows.push_back({r.scenario, r.algorithm, 0, 0, 0, 0, 0, 0});
            groups.emplace_back();
        }
        groups[g].push_back(metric(r));
    }
    for (std::size_t g = 0; g < rows.size(); ++g) {
        auto& vals = groups[g];
        std::sort(vals.begin(), vals.end());
        const std::size_t n = vals.size();
        rows[g].samples = static_cast<int>(n);
        rows[g].min = vals.front();
        rows[g].max = vals.back();
        rows[g].median = detail::median_of(vals, 0, n);
        const std::size_t half = n / 2;
        rows[g].q1 = n == 1 ? vals[0] : detail::median_of(vals, 0, half);
        rows[g].q3 = n == 1 ? vals[0] : detail::median_of(vals, n - half, n);
    }
    return rows;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "scenario,algorithm,samples,min,q1,median,q3,max\n";
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',';
        out += r.algorithm;
        out += ',';
        out += std::to_string(r.samples);
        out += ',';
        out += format_double(r.min);
        out += ',';
        out += format_double(r.q1);
        out += ',';
        out += format_double(r.median);
        out += ',';
        out += format_double(r.q3);
        out += ',';
        out += format_double(r.max);
        out += '\n';
    }
    return out;
}

/// Minimal grouped bar chart of group medians, one group per scenario, one
/// bar per algorithm. Pure string assembly, so output is deterministic.
inline std::string median_bar_chart_svg(const std::vector<SummaryRow>& rows,
                                        const std::string& title) {
    std::vector<std::string> scenarios, algorithms;
    for (const auto& r : rows) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
            scenarios.push_back(r.scenario);
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
            algorithms.push_back(r.algorithm);
    }
    double max_val = 0.0;
    for (const auto& r : rows) max_val = std::max(max_val, r.median);
    if (max_val <= 0.0) max_val = 1.0;

    const int width = 720, height = 380;
    const int left = 60, bottom = 330, top = 40;
    const double plot_h = bottom - top;
    const double group_w = static_cast<double>(width - left - 20) / scenarios.size();
    const double bar_w = group_w / (algorithms.size() + 1);
    static const char* kColors[] = {"#4878cf", "#e8a33d", "#6fb36f", "#c85c5c",
                                    "#8d6cb0", "#5bb0b6"};

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<text x=\"" + std::to_string(width / 2) +
           "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
           title + "</text>\n";
    svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(bottom) + "\" x2=\"" +
           std::to_string(width - 20) + "\" y2=\"" + std::to_string(bottom) +
           "\" stroke=\"#333\"/>\n";
    svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(top) + "\" x2=\"" +
           std::to_string(left) + "\" y2=\"" + std::to_string(bottom) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + std::to_string(left - 8) + "\" y=\"" + std::to_string(top + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
           format_double(max_val) + "</text>\n";

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const double gx = left + s * group_w;
        svg += "<text x=\"" + format_double(gx + group_w / 2) + "\" y=\"" +
               std::to_string(bottom + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               scenarios[s] + "</text>\n";
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            double median = 0.0;
            for (const auto& r : rows) {
                if (r.scenario == scenarios[s] && r.algorithm == algorithms[a]) median = r.median;
            }
            const double h = plot_h * median / max_val;
            const double x = gx + bar_w * (a + 0.5);
            svg += "<rect x=\"" + format_double(x) + "\" y=\"" + format_double(bottom - h) +
                   "\" width=\"" + format_double(bar_w * 0.85) + "\" height=\"" + format_double(h) +
                   "\" fill=\"" + kColors[a % 6] + "\"/>\n";
        }
    }
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        const int lx = left + static_cast<int>(a) * 110;
        svg += "<rect x=\"" + std::to_string(lx) + "\" y=\"26\" width=\"10\" height=\"10\" fill=\"" +
               std::string(kColors[a % 6]) + "\"/>\n";
        svg += "<text x=\"" + std::to_string(lx + 14) +
               "\" y=\"35\" font-family=\"sans-serif\" font-size=\"11\">" + algorithms[a] +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << content;
}

} // namespace detail

/// Writes the raw CSV plus, per figure metric, a five-number summary CSV and
/// a median bar chart. Returns the paths written.
inline std::vector<std::string> emit_results(const std::vector<MetricsRecord>& records,
                                             const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw Error("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const fs::path p = fs::path(out_dir) / name;
        detail::write_file(p, content);
        written.push_back(p.string());
    };

    emit("raw_results.csv", raw_results_csv(records));

    struct Figure {
        const char* stem;
        const char* title;
        double (*metric)(const MetricsRecord&);
    };
    const Figure figures[] = {
        {"summary_machines_used", "Physical machines used (median over seeds)",
         [](const MetricsRecord& r) { return static_cast<double>(r.machines_used); }},
        {"summary_avg_utilization", "Average utilization of active machines (median over seeds)",
         [](const MetricsRecord& r) { return r.avg_utilization; }},
        {"summary_comm_cost", "Cross-machine communication cost (median over seeds)",
         [](const MetricsRecord& r) { return r.comm_cost; }},
    };
    for (const auto& fig : figures) {
        const auto rows = summarize_metric(records, fig.metric);
        emit(std::string(fig.stem) + ".csv", summary_csv(rows));
        emit(std::string(fig.stem) + ".svg", median_bar_chart_svg(rows, fig.title));
    }
    return written;
}

} // namespace dsom
