// Command-line front end: schedule one scenario, reproduce the benchmark
// experiments, query the exhaustive oracle, or run the collection-dispatch
// simulation. Exit codes: 0 success, 2 usage error, 1 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dsom/dsom.hpp"

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
    if (const char* env = std::getenv("DSOM_OUT_DIR")) return env;
    return "results";
}

dsom::FitnessWeights parse_weights(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(in, tok, ',')) {
        try {
            vals.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw UsageError("weights must be three comma-separated numbers, got '" + text + "'");
        }
    }
    if (vals.size() != 3)
        throw UsageError("weights must be three comma-separated numbers, got '" + text + "'");
    dsom::FitnessWeights w{vals[0], vals[1], vals[2]};
    try {
        dsom::validate(w);
    } catch (const dsom::StructuralError& e) {
        throw UsageError(e.what());
    }
    return w;
}

dsom::ScaleConfig parse_scale(const std::string& token) {
    if (const auto* builtin = dsom::find_builtin_scale(token)) return *builtin;
    // custom scales look like "40x4": containers x machines
    const auto x = token.find('x');
    if (x != std::string::npos) {
        try {
            const int n = std::stoi(token.substr(0, x));
            const int m = std::stoi(token.substr(x + 1));
            if (n > 0 && m > 0) return {"C" + token, n, m};
        } catch (const std::exception&) {
        }
    }
    throw UsageError("unknown scale '" + token + "' (use S1, S2, S3 or <containers>x<machines>)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

// Shared flag values; CLI11 binds into these and each subcommand reads what
// it declared.
struct Options {
    std::string scenario_file;
    std::string scale;
    int containers = 0;
    int machines = 0;
    std::uint64_t scenario_seed = 0;
    std::string algorithm = "dsom";
    std::string weights_text = "0.2,0.5,0.3";
    dsom::GAParams ga;
    std::string out_dir = default_out_dir();

    std::string scales_text = "S1,S2,S3";
    std::string algorithms_text = "dsom,maxutil,fcfs,roundrobin";
    int seed_count = 10;
    std::uint64_t seed_base = 0;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    std::string timing = "wall";

    std::string tasks_file;
    int num_tasks = 100;
    double max_work = 20.0;
    long arrival_span = 50;
    double failure_rate = 0.01;
    long restart_delay = 3;
    long detection_delay = 0;
    double node_rate = 1.0;
    std::uint64_t sim_seed = 0;
};

void add_ga_options(CLI::App* cmd, Options& opt, const char* seed_flag = "--seed") {
    cmd->add_option("--population", opt.ga.population_size, "GA population size");
    cmd->add_option("--generations", opt.ga.max_generations, "GA generation cap");
    cmd->add_option("--stall", opt.ga.stall_generations,
                    "stop after this many generations without improvement (<=0 disables)");
    cmd->add_option("--tournament", opt.ga.tournament_size, "tournament size");
    cmd->add_option("--crossover-rate", opt.ga.crossover_rate, "crossover probability");
    cmd->add_option("--mutation-rate", opt.ga.mutation_rate, "mutation probability");
    cmd->add_option(seed_flag, opt.ga.seed, "GA RNG seed");
}

std::string ga_config_string(const dsom::GAParams& ga) {
    std::ostringstream s;
    s << "population=" << ga.population_size << " generations=" << ga.max_generations
      << " stall=" << ga.stall_generations << " tournament=" << ga.tournament_size
      << " crossover-rate=" << ga.crossover_rate << " mutation-rate=" << ga.mutation_rate
      << " seed=" << ga.seed;
    return s.str();
}

dsom::Scenario resolve_scenario(const Options& opt) {
    const int sources = (!opt.scenario_file.empty()) + (!opt.scale.empty()) +
                        (opt.containers > 0 || opt.machines > 0);
    if (sources != 1)
        throw UsageError("pick exactly one scenario source: --scenario, --scale, or "
                         "--containers with --machines");
    if (!opt.scenario_file.empty()) {
        try {
            return dsom::load_scenario(opt.scenario_file);
        } catch (const dsom::StructuralError& e) {
            throw UsageError(e.what());
        }
    }
    dsom::ScaleConfig config;
    if (!opt.scale.empty()) {
        config = parse_scale(opt.scale);
    } else {
        if (opt.containers < 1 || opt.machines < 1)
            throw UsageError("--containers and --machines must both be >= 1");
        config = {"C" + std::to_string(opt.containers) + "x" + std::to_string(opt.machines),
                  opt.containers, opt.machines};
    }
    return dsom::generate_scenario(config, opt.scenario_seed);
}

std::string metrics_line(const dsom::Scenario& scn, const dsom::Placement& p,
                         const dsom::FitnessWeights& weights, const std::string& algorithm) {
    const auto loads = dsom::machine_loads(scn, p);
    const auto fit = dsom::fitness(scn, p, weights);
    std::ostringstream s;
    s << "scenario=" << scn.name << " algorithm=" << algorithm
      << " machines_used=" << fit.active_machines
      << " avg_utilization=" << dsom::format_double(dsom::mean_active_load(loads))
      << " comm_cost=" << dsom::format_double(fit.comm_cost)
      << " fitness=" << dsom::format_double(fit.total);
    return s.str();
}

void write_placement_file(const fs::path& path, const dsom::Scenario& scn,
                          const dsom::Placement& p, const dsom::FitnessWeights& weights,
                          const std::string& algorithm) {
    nlohmann::json j;
    j["scenario"] = scn.name;
    j["algorithm"] = algorithm;
    j["assignment"] = p.assignment;
    const auto fit = dsom::fitness(scn, p, weights);
    j["fitness"] = fit.total;
    j["machines_used"] = fit.active_machines;
    j["comm_cost"] = fit.comm_cost;
    std::ofstream out(path);
    if (!out) throw dsom::Error("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

int cmd_schedule(const Options& opt) {
    const dsom::FitnessWeights weights = parse_weights(opt.weights_text);
    const dsom::Scenario scn = resolve_scenario(opt);
    const dsom::Algorithm algo = dsom::parse_algorithm(opt.algorithm);
    std::cout << "config: subcommand=schedule scenario=" << scn.name
              << " scenario-seed=" << opt.scenario_seed << " algorithm=" << opt.algorithm
              << " weights=" << opt.weights_text << " " << ga_config_string(opt.ga)
              << " out=" << opt.out_dir << "\n";
    const dsom::Placement p = dsom::run_scheduler(scn, algo, weights, opt.ga);
    fs::create_directories(opt.out_dir);
    const fs::path out = fs::path(opt.out_dir) /
                         ("placement_" + scn.name + "_" + opt.algorithm + ".json");
    write_placement_file(out, scn, p, weights, opt.algorithm);
    std::cout << metrics_line(scn, p, weights, opt.algorithm) << "\n";
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_experiment(const Options& opt) {
    dsom::ExperimentPlan plan;
    plan.weights = parse_weights(opt.weights_text);
    plan.ga_params = opt.ga;
    for (const auto& tok : split_list(opt.scales_text)) plan.scales.push_back(parse_scale(tok));
    for (const auto& tok : split_list(opt.algorithms_text)) {
        try {
            plan.algorithms.push_back(dsom::parse_algorithm(tok));
        } catch (const dsom::StructuralError& e) {
            throw UsageError(e.what());
        }
    }
    if (opt.seed_count < 1) throw UsageError("--seeds must be >= 1");
    for (int i = 0; i < opt.seed_count; ++i) plan.seeds.push_back(opt.seed_base + i);
    plan.jobs = std::max(1, opt.jobs);
    if (opt.timing != "wall" && opt.timing != "off")
        throw UsageError("--timing must be 'wall' or 'off'");
    plan.record_wall_time = opt.timing == "wall";

    std::cout << "config: subcommand=experiment scales=" << opt.scales_text
              << " algorithms=" << opt.algorithms_text << " seeds=" << opt.seed_count
              << " seed-base=" << opt.seed_base << " weights=" << opt.weights_text << " "
              << ga_config_string(opt.ga) << " jobs=" << plan.jobs << " timing=" << opt.timing
              << " out=" << opt.out_dir << "\n";

    const auto records = dsom::run_experiment(plan);
    const auto written = dsom::emit_results(records, opt.out_dir);
    for (const auto& path : written) std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_oracle(const Options& opt) {
    const dsom::FitnessWeights weights = parse_weights(opt.weights_text);
    const dsom::Scenario scn = resolve_scenario(opt);
    std::cout << "config: subcommand=oracle scenario=" << scn.name
              << " containers=" << scn.num_containers() << " machines=" << scn.num_machines()
              << " scenario-seed=" << opt.scenario_seed << " weights=" << opt.weights_text
              << " out=" << opt.out_dir << "\n";
    const auto [placement, fit] = dsom::brute_force_optimum(scn, weights);
    std::cout << metrics_line(scn, placement, weights, "oracle") << "\n";
    std::cout << "assignment:";
    for (int m : placement.assignment) std::cout << " " << m;
    std::cout << "\n";
    fs::create_directories(opt.out_dir);
    const fs::path out = fs::path(opt.out_dir) / ("placement_" + scn.name + "_oracle.json");
    write_placement_file(out, scn, placement, weights, "oracle");
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_dispatch(const Options& opt) {
    const dsom::FitnessWeights weights = parse_weights(opt.weights_text);
    const dsom::Algorithm algo = dsom::parse_algorithm(opt.algorithm);

    dsom::ScaleConfig config;
    if (!opt.scale.empty()) {
        config = parse_scale(opt.scale);
    } else if (opt.containers > 0 && opt.machines > 0) {
        config = {"C" + std::to_string(opt.containers) + "x" + std::to_string(opt.machines),
                  opt.containers, opt.machines};
    } else {
        throw UsageError("dispatch needs --scale or --containers with --machines");
    }

    std::vector<dsom::CollectionTask> tasks;
    if (!opt.tasks_file.empty()) {
        try {
            tasks = dsom::load_tasks(opt.tasks_file);
        } catch (const dsom::StructuralError& e) {
            throw UsageError(e.what());
        }
    } else {
        tasks = dsom::generate_tasks(opt.num_tasks, opt.max_work, opt.arrival_span, opt.sim_seed);
    }

    dsom::SimParams sim;
    sim.failure_rate = opt.failure_rate;
    sim.restart_delay = opt.restart_delay;
    sim.detection_delay = opt.detection_delay;
    sim.node_rate = opt.node_rate;
    sim.seed = opt.sim_seed;

    std::cout << "config: subcommand=dispatch scale=" << config.name
              << " algorithm=" << opt.algorithm << " tasks="
              << (opt.tasks_file.empty() ? "generated:" + std::to_string(tasks.size())
                                         : opt.tasks_file)
              << " failure-rate=" << opt.failure_rate << " restart-delay=" << opt.restart_delay
              << " detection-delay=" << opt.detection_delay << " node-rate=" << opt.node_rate
              << " sim-seed=" << opt.sim_seed << " weights=" << opt.weights_text << " "
              << ga_config_string(opt.ga) << " out=" << opt.out_dir << "\n";

    const auto report = dsom::dispatch_with_scheduler(config, tasks, algo, weights, opt.ga, sim);

    fs::create_directories(opt.out_dir);
    std::string per_task = "task,arrival_tick,work_units,completion_tick\n";
    for (const auto& t : tasks) {
        per_task += std::to_string(t.id) + "," + std::to_string(t.arrival_tick) + "," +
                    dsom::format_double(t.work_units) + "," +
                    std::to_string(report.completion_tick[t.id]) + "\n";
    }
    std::string summary = "makespan_ticks,tasks_completed,restarts,consumed_work_units,completed_work_units\n";
    summary += std::to_string(report.makespan_ticks) + "," + std::to_string(report.tasks_completed) +
               "," + std::to_string(report.restarts) + "," +
               dsom::format_double(report.consumed_work_units) + "," +
               dsom::format_double(report.completed_work_units) + "\n";
    const fs::path task_path = fs::path(opt.out_dir) / "dispatch_tasks.csv";
    const fs::path summary_path = fs::path(opt.out_dir) / "dispatch_summary.csv";
    {
        std::ofstream out(task_path);
        if (!out) throw dsom::Error("cannot write '" + task_path.string() + "'");
        out << per_task;
    }
    {
        std::ofstream out(summary_path);
        if (!out) throw dsom::Error("cannot write '" + summary_path.string() + "'");
        out << summary;
    }
    std::cout << "makespan_ticks=" << report.makespan_ticks
              << " tasks_completed=" << report.tasks_completed << " restarts=" << report.restarts
              << " consumed=" << dsom::format_double(report.consumed_work_units)
              << " completed=" << dsom::format_double(report.completed_work_units) << "\n";
    std::cout << "wrote " << task_path.string() << "\n";
    std::cout << "wrote " << summary_path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"microservice container placement: genetic scheduler, baselines, "
                 "benchmark harness and collection-dispatch simulator"};
    app.require_subcommand(1);

    auto* schedule = app.add_subcommand("schedule", "place one scenario with one algorithm");
    schedule->add_option("--scenario", opt.scenario_file, "scenario JSON file");
    schedule->add_option("--scale", opt.scale, "built-in scale (S1, S2, S3) or NxM");
    schedule->add_option("--containers", opt.containers, "custom scale: container count");
    schedule->add_option("--machines", opt.machines, "custom scale: machine count");
    schedule->add_option("--scenario-seed", opt.scenario_seed, "scenario generation seed");
    schedule->add_option("--algorithm", opt.algorithm, "dsom, maxutil, fcfs or roundrobin");
    schedule->add_option("--weights", opt.weights_text, "alpha,beta,lambda (must sum to 1)");
    schedule->add_option("--out", opt.out_dir, "output directory");
    add_ga_options(schedule, opt);

    auto* experiment = app.add_subcommand("experiment", "run the full benchmark grid");
    experiment->add_option("--scales", opt.scales_text, "comma-separated scales");
    experiment->add_option("--algorithms", opt.algorithms_text, "comma-separated algorithms");
    experiment->add_option("--seeds", opt.seed_count, "number of scenario seeds");
    experiment->add_option("--seed-base", opt.seed_base, "first scenario seed");
    experiment->add_option("--weights", opt.weights_text, "alpha,beta,lambda (must sum to 1)");
    experiment->add_option("--jobs", opt.jobs, "worker threads for experiment cells");
    experiment->add_option("--timing", opt.timing,
                           "'wall' records wall time, 'off' writes 0 for byte-stable reruns");
    experiment->add_option("--out", opt.out_dir, "output directory");
    add_ga_options(experiment, opt);

    auto* oracle = app.add_subcommand("oracle", "exhaustive optimum of a tiny scenario");
    oracle->add_option("--scenario", opt.scenario_file, "scenario JSON file");
    oracle->add_option("--containers", opt.containers, "generated scenario: container count");
    oracle->add_option("--machines", opt.machines, "generated scenario: machine count");
    oracle->add_option("--seed", opt.scenario_seed, "scenario generation seed");
    oracle->add_option("--weights", opt.weights_text, "alpha,beta,lambda (must sum to 1)");
    oracle->add_option("--out", opt.out_dir, "output directory");

    auto* dispatch = app.add_subcommand("dispatch", "simulate the monitored collection loop");
    dispatch->add_option("--scale", opt.scale, "built-in scale (S1, S2, S3) or NxM");
    dispatch->add_option("--containers", opt.containers, "custom scale: container count");
    dispatch->add_option("--machines", opt.machines, "custom scale: machine count");
    dispatch->add_option("--algorithm", opt.algorithm, "placement algorithm");
    dispatch->add_option("--tasks", opt.tasks_file, "task list JSON file");
    dispatch->add_option("--num-tasks", opt.num_tasks, "generated tasks: count");
    dispatch->add_option("--max-work", opt.max_work, "generated tasks: max work units");
    dispatch->add_option("--arrival-span", opt.arrival_span, "generated tasks: arrival window");
    dispatch->add_option("--failure-rate", opt.failure_rate, "per-node per-tick failure probability");
    dispatch->add_option("--restart-delay", opt.restart_delay, "ticks from detection to healthy");
    dispatch->add_option("--detection-delay", opt.detection_delay, "monitor latency in ticks");
    dispatch->add_option("--node-rate", opt.node_rate, "work units per node per tick");
    dispatch->add_option("--seed", opt.sim_seed, "scenario + failure stream seed");
    dispatch->add_option("--weights", opt.weights_text, "alpha,beta,lambda (must sum to 1)");
    dispatch->add_option("--out", opt.out_dir, "output directory");
    add_ga_options(dispatch, opt, "--ga-seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(schedule)) return cmd_schedule(opt);
        if (app.got_subcommand(experiment)) return cmd_experiment(opt);
        if (app.got_subcommand(oracle)) return cmd_oracle(opt);
        if (app.got_subcommand(dispatch)) return cmd_dispatch(opt);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
