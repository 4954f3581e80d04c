/// @file evp.hpp
/// @brief Elastic-viscous-plastic stepping with stress/velocity subcycling.
///
/// Within one step of length dt, n_sub subcycles of dt_e = dt/n_sub advance
/// a prognostic stress and the velocity with h, A and P frozen at the old
/// level. The viscosities are refreshed from the latest velocity every
/// subcycle and the elastic modulus is E = zeta/T with T = damping_factor*dt.
/// The thickness and concentration are then transported over dt with the
/// final velocity.
#pragma once

#include <functional>
#include <span>

#include "icefloe/core.hpp"
#include "icefloe/explicit_driver.hpp"
#include "icefloe/model.hpp"

namespace icefloe::evp {

struct EvpConfig {
    std::size_t n_sub = 1000;
    double damping_factor = 0.36;
};

void validate(const EvpConfig& cfg);

/// Implicit-in-sigma relaxation update, cell by cell:
/// (s - s_prev)/dt_e + s/((1+e^-2) T) + P/(2 (1+e^-2) T) = (zeta/T) du_dx.
Field stress_update(std::span<const double> sigma_prev, std::span<const double> du_dx_prev,
                    std::span<const double> zeta_prev, std::span<const double> pressure,
                    double dt_e, double damping_time, const PhysParams& p);

/// Same update with the strain rate and viscosity computed from u_prev
/// through the active scheme (zeta from P^{n-1} and the current strain).
Field stress_update_from_velocity(std::span<const double> sigma_prev, std::span<const double> u_prev,
                                  std::span<const double> pressure, double dt_e, double damping_time,
                                  const ModelSetup& setup);

/// u_s = u_prev + dt_e/(rho max(h_u, floor)) (tau_a - tau_w(u_prev) + dsigma_s/dx).
Field velocity_update(std::span<const double> u_prev, std::span<const double> sigma_s,
                      std::span<const double> h_at_u, double dt_e, const ModelSetup& setup);

/// VP constitutive stress of a state; used to seed the prognostic stress.
Field constitutive_stress(const State& state, const ModelSetup& setup);

/// Called after every subcycle with the subcycle index (1-based) and velocity.
using SubcycleFn = std::function<void(std::size_t subcycle, std::span<const double> u)>;

/// One full EVP step. `sigma` carries the prognostic stress in and out.
/// Stops subcycling early (returning a non-finite velocity) as soon as the
/// velocity stops being finite. Transport uses TVRK3 with the final velocity
/// held fixed and may throw NonFiniteError.
State evp_step(const State& state, Field& sigma, double dt, const EvpConfig& cfg,
               const ModelSetup& setup, const RhsHooks& hooks = {},
               const SubcycleFn& on_subcycle = {});

}  // namespace icefloe::evp
