/// @file cli_io.hpp
/// @brief Run configuration, built-in scenarios, orchestration and CSV/JSON output.
///
/// A configuration is line-oriented `key = value` text. `#` starts a comment.
/// The `scenario` key selects a set of defaults; every other key overrides
/// one field regardless of where it appears. Lengths accept `m`/`km` and
/// times `s`/`min`/`h`/`d` suffixes, converted to SI on parse.
///
/// A run directory holds
///
///   snapshots/snap_NNNNNN.csv   x_m,u_mps,h_m,A at cell centers
///   snapshots/index.csv         file,time_s
///   run_log.jsonl               one JSON event per line
///   summary.json                status, times, extrema, activations
///   subcycle_tail.csv           EVP only: per-subcycle velocity extremes
///   subcycle_trace.csv          EVP only: velocity profiles of the last steps
///   convergence.csv             manufactured-solution runs only
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "icefloe/core.hpp"
#include "icefloe/evp.hpp"
#include "icefloe/jfnk.hpp"
#include "icefloe/potential.hpp"
#include "icefloe/simulation.hpp"

namespace icefloe::cli {

enum class Scenario { Mms, SharpVp, SharpEvp, PotentialDirichlet, Custom };
enum class InitialKind { Sharp, Uniform, Manufactured };

const char* to_string(Scenario s);
const char* to_string(InitialKind k);

/// Domain length shared by every built-in scenario.
inline constexpr double kScenarioLength = 2.0e6;

/// Thin ice strip in the middle of the domain, thick ice at both ends.
struct SharpInitialCondition {
    double strip_begin = 400.0e3;  // m
    double strip_end = 1600.0e3;   // m
    double thin_h = 0.01;
    double thick_h = 2.0;
    double thin_a = 0.0;
    double thick_a = 0.8;
};

struct RunSpec {
    Scenario scenario = Scenario::Custom;
    Scheme scheme = Scheme::CD;
    Integrator integrator = Integrator::Tvrk3Explicit;
    Boundary boundary = Boundary::Periodic;
    std::size_t n_cells = 200;
    double dx = 1.0e4;
    double dt = 1.0;
    double horizon = 3600.0;
    double wind = 10.0;
    double weno_eps = 1e-6;
    PhysParams params;
    evp::EvpConfig evp;
    jfnk::NewtonConfig newton;

    /// Off still runs the bounds watchdog, recording intervals without forcing.
    bool potential_on = false;
    potential::PotentialConfig potential;

    InitialKind initial = InitialKind::Uniform;
    double h0 = 1.0;
    double a0 = 0.9;
    double u0 = 0.0;
    SharpInitialCondition sharp;

    double snapshot_every = 60.0;  // s; 0 writes only the first and last
    /// EVP: number of final steps whose full subcycle profiles are written.
    std::size_t trace_steps = 1;
    /// Manufactured-solution resolutions, coarse to fine.
    std::vector<std::size_t> mms_cells{50, 100, 200};
    std::filesystem::path out_dir = "icefloe_out";

    [[nodiscard]] double length() const { return static_cast<double>(n_cells) * dx; }
};

/// Defaults of a built-in scenario.
RunSpec scenario_defaults(Scenario s);

/// Snapshot cadence used unless configured: 60 s for runs up to a day,
/// one hour beyond.
double default_snapshot_every(double horizon);

/// Parses configuration text, then applies `key=value` overrides in order.
/// Throws ConfigError with the offending line on any parse or constraint
/// error; the returned spec has passed validate().
RunSpec load_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Constraint checks that do not need a run: scheme/boundary/integrator
/// pairing, positivity of steps and sizes, initial-condition placement.
void validate(const RunSpec& spec);

SimulationConfig simulation_config(const RunSpec& spec);
State initial_state(const RunSpec& spec);

struct RunReport {
    RunStatus status = RunStatus::Completed;
    int exit_code = 0;
    std::string message;
    std::filesystem::path summary_path;
    RunResult result;  // empty for manufactured-solution studies
};

int exit_code(RunStatus s);

/// Executes a run configuration and writes its run directory (created if missing).
RunReport run(const RunSpec& spec);

/// Manufactured-solution study for one scheme, writing convergence.csv and
/// summary.json into out_dir.
RunReport run_convergence(const RunSpec& spec);

struct Snapshot {
    std::vector<double> x, u, h, a;
};

/// Center-located view of a state: u averaged to centers on the C-grid.
Snapshot to_snapshot(const State& state, const Grid& grid);

void write_snapshot(const State& state, const Grid& grid, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace icefloe::cli
