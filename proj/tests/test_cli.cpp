// End-to-end checks of the installed binary; the test runner provides its
// path via DSOM_CLI_BIN.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dsom/dsom.hpp"

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("DSOM_CLI_BIN"); }

int run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("usage errors exit with 2, runtime failures with 1") {
    REQUIRE(cli_path() != nullptr);
    CHECK(run_cli("schedule --scale S1 --weights 0.5,0.5,0.5") == 2);
    CHECK(run_cli("schedule --scale S9") == 2);
    CHECK(run_cli("schedule --no-such-flag") == 2);
    CHECK(run_cli("schedule --scenario /nonexistent.json") == 2);
    CHECK(run_cli("nonsense") == 2);
    CHECK(run_cli("--help") == 0);
    // guard trips at runtime: 3^13 assignments is past the exhaustive limit
    CHECK(run_cli("oracle --containers 13 --machines 3") == 1);
}

TEST_CASE("schedule is reproducible and writes a placement document") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir_a("dsom_cli_sched_a");
    TempDir dir_b("dsom_cli_sched_b");
    const std::string common =
        "schedule --scale S1 --scenario-seed 7 --algorithm dsom --seed 42"
        " --population 12 --generations 25 --stall 8 --out ";
    REQUIRE(run_cli(common + dir_a.path.string()) == 0);
    REQUIRE(run_cli(common + dir_b.path.string()) == 0);

    const auto placement_a = slurp(dir_a.path / "placement_S1_dsom.json");
    CHECK(placement_a == slurp(dir_b.path / "placement_S1_dsom.json"));

    const auto j = nlohmann::json::parse(placement_a);
    CHECK(j.at("scenario") == "S1");
    CHECK(j.at("assignment").size() == 80);
    CHECK(j.at("fitness").get<double>() > 0.0);
}

TEST_CASE("oracle output matches a generously budgeted in-process GA run") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir("dsom_cli_oracle");
    REQUIRE(run_cli("oracle --containers 6 --machines 3 --seed 1 --out " + dir.path.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "placement_C6x3_oracle.json"));
    const double oracle_total = j.at("fitness").get<double>();

    const auto scn = dsom::generate_scenario({"C6x3", 6, 3}, 1);
    dsom::GAParams ga;
    ga.max_generations = 500;
    ga.stall_generations = 500;
    ga.seed = 3;
    const auto run = dsom::dsom_schedule(scn, dsom::FitnessWeights{}, ga);
    CHECK(run.best_fitness.total == doctest::Approx(oracle_total).epsilon(1e-9));
}

TEST_CASE("schedule accepts a scenario file and matches the in-process result") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir("dsom_cli_schedfile");
    const auto scn = dsom::generate_scenario({"filecase", 12, 4}, 21);
    const auto scenario_path = dir.path / "scenario.json";
    dsom::save_scenario(scn, scenario_path.string());

    REQUIRE(run_cli("schedule --scenario " + scenario_path.string() +
                    " --algorithm maxutil --out " + dir.path.string()) == 0);
    const auto j = nlohmann::json::parse(slurp(dir.path / "placement_filecase_maxutil.json"));
    const auto expected = dsom::schedule_max_utilization_first(scn);
    REQUIRE(j.at("assignment").size() == expected.assignment.size());
    for (std::size_t i = 0; i < expected.assignment.size(); ++i)
        CHECK(j.at("assignment")[i].get<int>() == expected.assignment[i]);
}

TEST_CASE("dispatch consumes a task list file") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir("dsom_cli_taskfile");
    const auto tasks_path = dir.path / "tasks.json";
    {
        std::ofstream out(tasks_path);
        out << R"([{"work_units": 6, "arrival_tick": 0},
                   {"work_units": 4, "arrival_tick": 1, "affinity": 0},
                   {"work_units": 2, "arrival_tick": 0}])";
    }
    REQUIRE(run_cli("dispatch --scale 5x2 --algorithm fcfs --tasks " + tasks_path.string() +
                    " --failure-rate 0 --seed 2 --out " + dir.path.string()) == 0);
    const auto tasks_csv = slurp(dir.path / "dispatch_tasks.csv");
    CHECK(std::count(tasks_csv.begin(), tasks_csv.end(), '\n') == 4);  // header + 3 tasks
    // malformed task file is a usage error
    const auto bad_path = dir.path / "bad.json";
    {
        std::ofstream out(bad_path);
        out << "{\"work_units\": 1}";
    }
    CHECK(run_cli("dispatch --scale 5x2 --tasks " + bad_path.string()) == 2);
}

TEST_CASE("experiment emits its documented files") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir("dsom_cli_exp");
    const std::string cmd =
        "experiment --scales 8x3 --algorithms fcfs,roundrobin --seeds 2 --timing off"
        " --population 8 --generations 10 --stall 4 --out " + dir.path.string();
    REQUIRE(run_cli(cmd) == 0);
    const auto raw = slurp(dir.path / "raw_results.csv");
    CHECK(raw.find("scenario,algorithm,seed,") == 0);
    // header + 1 scale x 2 algorithms x 2 seeds
    CHECK(std::count(raw.begin(), raw.end(), '\n') == 5);
    CHECK(fs::exists(dir.path / "summary_machines_used.csv"));
    CHECK(fs::exists(dir.path / "summary_avg_utilization.svg"));
}

TEST_CASE("dispatch writes a per-task and a summary CSV") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir("dsom_cli_disp");
    const std::string cmd =
        "dispatch --scale 6x2 --algorithm fcfs --num-tasks 12 --max-work 6 --arrival-span 0"
        " --failure-rate 0 --seed 4 --out " + dir.path.string();
    REQUIRE(run_cli(cmd) == 0);
    const auto tasks_csv = slurp(dir.path / "dispatch_tasks.csv");
    CHECK(tasks_csv.find("task,arrival_tick,work_units,completion_tick") == 0);
    CHECK(std::count(tasks_csv.begin(), tasks_csv.end(), '\n') == 13);
    const auto summary = slurp(dir.path / "dispatch_summary.csv");
    CHECK(summary.find("makespan_ticks,") == 0);
    CHECK(summary.find(",0,") != std::string::npos);  // zero restarts at rate 0
}
