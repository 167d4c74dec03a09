#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nqent/entanglement.hpp"
#include "nqent/states.hpp"

namespace nqent {

enum class Mode { Simulate, Zeno, Stationary, Sweep, Verify };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);
OutputFormat parse_format(std::string_view text);

// Cartesian grid for `sweep`. Infinite tau values select the stationary limit.
struct SweepGrid {
    std::vector<int> n;
    std::vector<double> ratio;
    std::vector<double> s;
    std::vector<double> phi;
    std::vector<double> tau;
    std::vector<double> interval_T; // optional Zeno columns

    std::size_t cell_count() const;
};

inline constexpr std::size_t kMaxSweepRows = 10'000'000;

struct RunConfig {
    Mode mode = Mode::Simulate;

    int n = 4;
    double ratio = 0.1;
    InitialKind kind = InitialKind::TwoQubitSuperposition;
    double s = 0.0;
    double phi = 0.0;

    double tau_max = 50.0;
    int samples = 501;
    std::vector<PairClass> pair_classes;
    bool survival = false; // emit P0 = |E|^2
    bool esd = false;      // emit sudden-death events per pair class

    std::vector<double> zeno_intervals;
    bool zeno_series = false;

    SweepGrid sweep;

    std::string output_path; // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    unsigned threads = 0; // 0: NQENT_THREADS, then hardware concurrency

    // Per-check overrides of the verify tolerances.
    std::map<std::string, double> verify_tolerances;

    InitialSpec spec() const;
    ModelParams params() const { return ModelParams(n, ratio); }

    // Throws ValidationError when the config cannot run in its mode.
    void validate() const;
};

// Fields absent from the document keep their current value in `base`.
RunConfig merge_config_json(RunConfig base, const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& config);

unsigned resolve_threads(unsigned requested);

// Sentinels are carried as strings ("inf", "n/a", "none").
using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct RunOutput {
    Table table;
    std::optional<Table> events; // sudden-death events, when requested
    // Overall verdict; only `verify` can set this to false.
    bool passed = true;
};

// Shortest round-trip decimal form of a finite double; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double value);
std::string format_cell(const Cell& cell);

std::string render_csv(const Table& table);
std::string render_json(const RunOutput& output);

RunOutput run_simulate(const RunConfig& config);
RunOutput run_zeno(const RunConfig& config);
RunOutput run_stationary(const RunConfig& config);
RunOutput run_sweep(const RunConfig& config);
RunOutput run_verify(const RunConfig& config);

RunOutput run(const RunConfig& config);

// Renders in the configured format and writes to config.output_path (or stdout).
// CSV event tables go to "<output_path>.esd.csv". Throws IoError.
void write_output(const RunConfig& config, const RunOutput& output);

} // namespace nqent
