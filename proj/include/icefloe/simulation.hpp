/// @file simulation.hpp
/// @brief Time-stepping loop shared by the explicit, implicit and EVP integrators.
///
/// After every full step the state is checked for finiteness; the first
/// non-finite value ends the run as a blow-up and records the time of the
/// last finite step. The bounds watchdog runs on every finite step.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icefloe/core.hpp"
#include "icefloe/evp.hpp"
#include "icefloe/explicit_driver.hpp"
#include "icefloe/jfnk.hpp"
#include "icefloe/model.hpp"
#include "icefloe/potential.hpp"

namespace icefloe {

enum class Integrator { Tvrk3Explicit, BackwardEulerJfnk, Evp };
enum class RunStatus { Completed, BlowUp, NonConvergence };

const char* to_string(Integrator i);
const char* to_string(RunStatus s);

struct Extrema {
    double min_a = 0.0;
    double max_a = 0.0;
    double min_h = 0.0;
    double max_h = 0.0;
    bool seeded = false;

    void update(const State& s);
};

/// Velocity extremes after one EVP subcycle.
struct SubcycleExtrema {
    double step_time = 0.0;  // start of the step being subcycled
    std::size_t subcycle = 0;
    double u_min = 0.0;
    double u_max = 0.0;
};

/// Receives run events as they happen. Every method is optional.
class RunObserver {
public:
    virtual ~RunObserver() = default;
    virtual void on_snapshot(const State& /*state*/) {}
    virtual void on_newton(std::size_t /*step*/, double /*time*/, const jfnk::NewtonReport& /*rep*/) {}
    virtual void on_activation(const potential::ActivationEvent& /*event*/) {}
    virtual void on_warning(double /*time*/, const std::string& /*message*/) {}
    /// Return true to receive full velocity profiles for the EVP step that
    /// starts at step_time.
    virtual bool wants_subcycle_profiles(double /*step_time*/) { return false; }
    virtual void on_subcycle(double /*step_time*/, std::size_t /*subcycle*/,
                             std::span<const double> /*u*/) {}
};

struct SimulationConfig {
    ModelSetup model;
    Integrator integrator = Integrator::Tvrk3Explicit;
    double dt = 1.0;
    double horizon = 3600.0;
    /// Snapshot cadence in model seconds; 0 keeps only the first and last.
    double snapshot_every = 0.0;
    evp::EvpConfig evp;
    jfnk::NewtonConfig newton;
    /// Bounds watchdog and potential forcing; nullopt disables both.
    std::optional<potential::PotentialConfig> potential;
    ForcingFn mms_forcing;
    /// EVP: how many of the most recent steps keep per-subcycle extremes.
    std::size_t subcycle_tail_steps = 2;
    /// Also keep the emitted snapshots in the result.
    bool keep_snapshots = false;
};

struct RunResult {
    RunStatus status = RunStatus::Completed;
    State final_state;            // last finite state
    double end_time = 0.0;        // time of final_state
    std::optional<double> blowup_time;  // last finite time when blow-up was detected
    std::string message;
    std::size_t steps = 0;        // completed full steps
    Extrema extrema;              // over every finite step, initial state included
    std::vector<potential::ActivationEvent> activations;
    std::optional<potential::PotentialConfig> potential;
    std::vector<State> snapshots;
    std::vector<SubcycleExtrema> subcycle_tail;
    bool diffusion_warning = false;
    long newton_iterations = 0;
    int newton_max_iterations = 0;
};

/// Validates the configuration against the initial state; throws ConfigError.
void check_config(const State& initial, const SimulationConfig& cfg);

RunResult simulate(const State& initial, const SimulationConfig& cfg, RunObserver* observer = nullptr);

/// TVRK3 method-of-lines run of the full VP system (integrator forced to
/// Tvrk3Explicit).
RunResult run_explicit(const State& initial, SimulationConfig cfg, RunObserver* observer = nullptr);

}  // namespace icefloe
