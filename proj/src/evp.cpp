#include "icefloe/evp.hpp"

#include <algorithm>
#include <cmath>

#include "icefloe/rheology.hpp"

namespace icefloe::evp {

void validate(const EvpConfig& cfg) {
    if (cfg.n_sub < 1) throw ConfigError("evp: n_sub must be at least 1");
    if (!(cfg.damping_factor > 0.0)) throw ConfigError("evp: damping factor must be positive");
}

Field stress_update(std::span<const double> sigma_prev, std::span<const double> du_dx_prev,
                    std::span<const double> zeta_prev, std::span<const double> pressure,
                    double dt_e, double damping_time, const PhysParams& p) {
    const std::size_t n = sigma_prev.size();
    if (du_dx_prev.size() != n || zeta_prev.size() != n || pressure.size() != n) {
        throw ConfigError("evp stress update: field sizes differ");
    }
    const double kT = p.ellipse_factor() * damping_time;
    const double denom = 1.0 / dt_e + 1.0 / kT;
    Field sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double rhs = sigma_prev[j] / dt_e - pressure[j] / (2.0 * kT) +
                           zeta_prev[j] / damping_time * du_dx_prev[j];
        sigma[j] = rhs / denom;
    }
    return sigma;
}

Field stress_update_from_velocity(std::span<const double> sigma_prev, std::span<const double> u_prev,
                                  std::span<const double> pressure, double dt_e, double damping_time,
                                  const ModelSetup& setup) {
    const PhysParams& p = setup.params;
    const Field du_dx = strain_rate(u_prev, setup);
    Field zeta(du_dx.size());
    for (std::size_t j = 0; j < du_dx.size(); ++j) {
        zeta[j] = rheology::viscosities(pressure[j], rheology::strain_delta(du_dx[j], p), p).zeta;
    }
    return stress_update(sigma_prev, du_dx, zeta, pressure, dt_e, damping_time, p);
}

Field velocity_update(std::span<const double> u_prev, std::span<const double> sigma_s,
                      std::span<const double> h_at_u, double dt_e, const ModelSetup& setup) {
    const PhysParams& p = setup.params;
    const Field dsigma = stress_divergence(sigma_s, setup);
    const double tau_a = rheology::wind_stress(setup.wind, p);
    Field u(u_prev.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double force = tau_a - rheology::water_stress(u_prev[i], p) + dsigma[i];
        u[i] = u_prev[i] + dt_e / (p.rho_ice * std::max(h_at_u[i], kMassFloor)) * force;
    }
    apply_velocity_boundary(u, setup);
    return u;
}

Field constitutive_stress(const State& state, const ModelSetup& setup) {
    return rheology::stress_field(strain_rate(state.u, setup), state.h, state.a, setup.params);
}

State evp_step(const State& state, Field& sigma, double dt, const EvpConfig& cfg,
               const ModelSetup& setup, const RhsHooks& hooks, const SubcycleFn& on_subcycle) {
    validate(cfg);
    const double dt_e = dt / static_cast<double>(cfg.n_sub);
    const double damping_time = cfg.damping_factor * dt;

    Field pressure(state.h.size());
    for (std::size_t j = 0; j < pressure.size(); ++j) {
        pressure[j] = rheology::ice_strength(state.h[j], state.a[j], setup.params);
    }
    const Field h_u = thickness_at_u(state.h, setup);

    Field u = state.u;
    for (std::size_t s = 1; s <= cfg.n_sub; ++s) {
        sigma = stress_update_from_velocity(sigma, u, pressure, dt_e, damping_time, setup);
        u = velocity_update(u, sigma, h_u, dt_e, setup);
        if (on_subcycle) on_subcycle(s, u);
        if (!std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); })) {
            State broken = state;
            broken.u = std::move(u);
            broken.time = state.time + dt;
            return broken;
        }
    }

    State moved = state;
    moved.u = std::move(u);
    const TendencyFn rhs = [&](const State& s) { return transport_rhs(s, setup, hooks); };
    State next = tvrk3_step(moved, dt, rhs);
    next.u = std::move(moved.u);
    return next;
}

}  // namespace icefloe::evp
