/// @file explicit_driver.hpp
/// @brief Semidiscrete VP right-hand side and the TVRK3 integrator.
#pragma once

#include <array>
#include <functional>
#include <stdexcept>

#include "icefloe/core.hpp"
#include "icefloe/model.hpp"
#include "icefloe/potential.hpp"

namespace icefloe {

/// (F_u, F_h, F_A) at a point; F_u is a force per unit area (N/m^2) added to
/// the momentum balance, F_h and F_A are rates added to the transports.
using ForcingFn = std::function<std::array<double, 3>(double x, double t)>;

struct RhsHooks {
    /// Evaluated at state.time; TVRK3 stages carry the step's base time, so
    /// the forcing is frozen across stages.
    ForcingFn mms_forcing;
    const potential::PotentialConfig* potential = nullptr;
};

struct Tendencies {
    Field du;
    Field dh;
    Field da;
};

/// Thrown when a tendency or stage value stops being finite.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// du/dt = (tau_a - tau_w + dsigma/dx + F_u) / (rho max(h_u, floor)),
/// dh/dt = -d(uh)/dx + F_h - f'_h(h), dA/dt = -d(uA)/dx + F_A - f'_A(A).
Tendencies vp_rhs(const State& state, const ModelSetup& setup, const RhsHooks& hooks = {});

/// Transport part only, for a velocity held fixed over the step.
Tendencies transport_rhs(const State& state, const ModelSetup& setup, const RhsHooks& hooks = {});

using TendencyFn = std::function<Tendencies(const State&)>;

/// One TVRK3 step applied componentwise to (u, h, A). Every stage is
/// evaluated with state.time equal to the base time; the result carries
/// time + dt. Throws NonFiniteError on a non-finite tendency.
State tvrk3_step(const State& state, double dt, const TendencyFn& rhs);

/// Largest explicit diffusion number (zeta+eta) dt / (rho h dx^2) over cells.
double diffusion_number(const State& state, const ModelSetup& setup, double dt);

}  // namespace icefloe
