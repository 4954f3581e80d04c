#include "icefloe/explicit_driver.hpp"

#include <algorithm>
#include <cmath>

#include "icefloe/rheology.hpp"

namespace icefloe {

namespace {

void require_finite(const Field& f, const char* name) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) {
            throw NonFiniteError(std::string("non-finite tendency d") + name + "/dt at slot " +
                                 std::to_string(i));
        }
    }
}

void add_transport_sources(const State& state, const ModelSetup& setup, const RhsHooks& hooks,
                           Tendencies& t) {
    const Grid& g = setup.grid;
    if (hooks.mms_forcing) {
        for (std::size_t j = 0; j < g.n_cells; ++j) {
            const auto f = hooks.mms_forcing(g.center_x(j), state.time);
            t.dh[j] += f[1];
            t.da[j] += f[2];
        }
    }
    if (hooks.potential) potential::add_forcing(*hooks.potential, state.h, state.a, t.dh, t.da);
}

}  // namespace

Tendencies transport_rhs(const State& state, const ModelSetup& setup, const RhsHooks& hooks) {
    Tendencies t;
    t.du.assign(state.u.size(), 0.0);
    t.dh = transport_divergence(state.u, state.h, setup);
    t.da = transport_divergence(state.u, state.a, setup);
    for (auto& v : t.dh) v = -v;
    for (auto& v : t.da) v = -v;
    add_transport_sources(state, setup, hooks, t);
    return t;
}

Tendencies vp_rhs(const State& state, const ModelSetup& setup, const RhsHooks& hooks) {
    const Grid& g = setup.grid;
    const PhysParams& p = setup.params;

    Tendencies t = transport_rhs(state, setup, hooks);

    const Field du_dx = strain_rate(state.u, setup);
    const Field sigma = rheology::stress_field(du_dx, state.h, state.a, p);
    const Field dsigma = stress_divergence(sigma, setup);
    const Field h_u = thickness_at_u(state.h, setup);
    const double tau_a = rheology::wind_stress(setup.wind, p);

    for (std::size_t i = 0; i < state.u.size(); ++i) {
        double force = tau_a - rheology::water_stress(state.u[i], p) + dsigma[i];
        if (hooks.mms_forcing) force += hooks.mms_forcing(g.u_x(i), state.time)[0];
        t.du[i] = force / (p.rho_ice * std::max(h_u[i], kMassFloor));
    }
    apply_velocity_boundary(t.du, setup);
    return t;
}

State tvrk3_step(const State& state, double dt, const TendencyFn& rhs) {
    const auto checked = [&](const State& s) {
        Tendencies t = rhs(s);
        require_finite(t.du, "u");
        require_finite(t.dh, "h");
        require_finite(t.da, "A");
        return t;
    };
    // Stages are written as u^n plus an increment. This is the same scheme as
    //   u1 = un + dt L(un)
    //   u2 = 3/4 un + 1/4 u1 + 1/4 dt L(u1)
    //   u^{n+1} = 1/3 un + 2/3 u2 + 2/3 dt L(u2)
    // but rounds once per stage instead of accumulating convex-combination
    // round-off, which otherwise dominates 1e-13 error levels over 5e4 steps.
    const auto stage = [](Field& out, const Field& base, double c0, const Field& l0, double c1,
                          const Field* l1, double c2, const Field* l2) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double inc = c0 * l0[i];
            if (l1) inc += c1 * (*l1)[i];
            if (l2) inc += c2 * (*l2)[i];
            out[i] = base[i] + inc;
        }
    };

    const Tendencies l0 = checked(state);
    State s1 = state;
    stage(s1.u, state.u, dt, l0.du, 0.0, nullptr, 0.0, nullptr);
    stage(s1.h, state.h, dt, l0.dh, 0.0, nullptr, 0.0, nullptr);
    stage(s1.a, state.a, dt, l0.da, 0.0, nullptr, 0.0, nullptr);

    const Tendencies l1 = checked(s1);
    State s2 = state;
    stage(s2.u, state.u, 0.25 * dt, l0.du, 0.25 * dt, &l1.du, 0.0, nullptr);
    stage(s2.h, state.h, 0.25 * dt, l0.dh, 0.25 * dt, &l1.dh, 0.0, nullptr);
    stage(s2.a, state.a, 0.25 * dt, l0.da, 0.25 * dt, &l1.da, 0.0, nullptr);

    const Tendencies l2 = checked(s2);
    State next = state;
    const double w01 = dt / 6.0;
    const double w2 = 2.0 * dt / 3.0;
    stage(next.u, state.u, w01, l0.du, w01, &l1.du, w2, &l2.du);
    stage(next.h, state.h, w01, l0.dh, w01, &l1.dh, w2, &l2.dh);
    stage(next.a, state.a, w01, l0.da, w01, &l1.da, w2, &l2.da);
    next.time = state.time + dt;
    return next;
}

double diffusion_number(const State& state, const ModelSetup& setup, double dt) {
    const PhysParams& p = setup.params;
    const Field du_dx = strain_rate(state.u, setup);
    double worst = 0.0;
    for (std::size_t j = 0; j < state.h.size(); ++j) {
        const double pressure = rheology::ice_strength(state.h[j], state.a[j], p);
        const auto v = rheology::viscosities(pressure, rheology::strain_delta(du_dx[j], p), p);
        const double mass = p.rho_ice * std::max(state.h[j], kMassFloor);
        worst = std::max(worst, (v.zeta + v.eta) * dt / (mass * setup.grid.dx * setup.grid.dx));
    }
    return worst;
}

}  // namespace icefloe
