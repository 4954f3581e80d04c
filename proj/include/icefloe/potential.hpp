/// @file potential.hpp
/// @brief Potential-function forcing that nudges h and A back into range.
///
/// The transport equations gain a source -f'(q), where f vanishes on the
/// physical range and grows outside it. Each out-of-range branch (A < 0,
/// A > 1, h < 0) is switched on the first time it is detected after a full
/// step, its admissible gamma interval is recorded from a local linearised
/// analysis, and it then stays on for the rest of the run.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icefloe/core.hpp"

namespace icefloe::potential {

enum class Form { Quadratic, Linear };

/// Half-open admissible range (lower, upper] for a gamma.
struct GammaInterval {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] bool feasible() const { return lower < upper; }
    [[nodiscard]] bool contains(double g) const { return g > lower && g <= upper; }
};

enum class Branch { ALow, AHigh, HLow };
const char* to_string(Branch b);

struct BranchState {
    bool active = false;
    double activation_time = 0.0;
    std::optional<GammaInterval> interval;
};

struct PotentialConfig {
    double gamma1 = 1e-3;   // s^-1, A < 0
    double gamma2 = 1e-2;   // s^-1, A > 1
    double gamma_h = 1e-3;  // s^-1, h < 0
    Form form = Form::Quadratic;
    /// false: the watchdog still detects and records intervals but no forcing
    /// is ever added (the unmodified model).
    bool apply_forcing = true;

    BranchState a_low;
    BranchState a_high;
    BranchState h_low;

    [[nodiscard]] const BranchState& branch(Branch b) const;
    BranchState& branch(Branch b);
};

/// -f'(q) for bounds [lo, hi] (hi absent for thickness).
double potential_force(double q, double lo, std::optional<double> hi, double g_lo, double g_hi,
                       Form form);

/// Adds -f'_h(h) to dh and -f'_A(A) to da for every active branch.
void add_forcing(const PotentialConfig& cfg, std::span<const double> h, std::span<const double> a,
                 std::span<double> dh, std::span<double> da);

/// Lower-bound analysis around 0 (A < 0 or h < 0), uniform over the domain:
/// lower = max_x(-a/2) over all cells, upper = min over violating cells of
/// -a/2 - (1 - B0)/(2 B0 dt). nullopt when no value is below zero.
std::optional<GammaInterval> estimate_lower_branch_range(std::span<const double> q,
                                                         std::span<const double> du_dx, double dt);

std::optional<GammaInterval> estimate_gamma1_range(std::span<const double> a,
                                                   std::span<const double> du_dx, double dt);
std::optional<GammaInterval> estimate_gamma_h_range(std::span<const double> h,
                                                    std::span<const double> du_dx, double dt);

/// Upper-bound analysis around 1 (A > 1), over violating cells only:
/// lower = max(-a B0/(2(B0-1))), upper = min(-a B0/(2(B0-1)) + B0/(2(B0-1) dt)).
std::optional<GammaInterval> estimate_gamma2_range(std::span<const double> a,
                                                   std::span<const double> du_dx, double dt);

struct ActivationEvent {
    Branch branch = Branch::ALow;
    double time = 0.0;
    GammaInterval interval;
    double gamma = 0.0;
    bool forcing_applied = true;
    bool infeasible = false;
    bool gamma_outside = false;
};

/// Checks bounds after a full step. Newly violated, not-yet-active branches
/// get their interval estimated and are switched on; already active branches
/// are never re-estimated. du_dx is the strain rate at the cell centers.
std::vector<ActivationEvent> watchdog_step(const State& state, PotentialConfig& cfg,
                                           std::span<const double> du_dx, double dt);

std::string describe(const ActivationEvent& e);

}  // namespace icefloe::potential
