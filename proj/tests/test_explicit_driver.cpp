#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "icefloe/explicit_driver.hpp"
#include "icefloe/model.hpp"
#include "icefloe/potential.hpp"
#include "icefloe/simulation.hpp"

using namespace icefloe;
using doctest::Approx;

namespace {

ModelSetup setup_for(Scheme scheme, Boundary b = Boundary::Periodic, std::size_t n = 40, double wind = 0.0) {
    ModelSetup s;
    s.grid = make_grid(n, 2e6 / static_cast<double>(n), layout_for(scheme), b);
    s.scheme = scheme;
    s.wind = wind;
    return s;
}

State uniform(const Grid& g, double h, double a) {
    State s = make_state(g);
    std::fill(s.h.begin(), s.h.end(), h);
    std::fill(s.a.begin(), s.a.end(), a);
    return s;
}

State smooth(const Grid& g) {
    State s = make_state(g);
    const double k = 2.0 * std::numbers::pi / g.length;
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = 0.05 + 0.02 * std::sin(k * g.u_x(i));
    for (std::size_t j = 0; j < s.h.size(); ++j) {
        s.h[j] = 1.0 + 0.4 * std::cos(k * g.center_x(j));
        s.a[j] = 0.8 + 0.1 * std::sin(2.0 * k * g.center_x(j));
    }
    if (g.layout == Layout::StaggeredCGrid) s.u.back() = s.u.front();
    return s;
}

double total(const Field& f) {
    double t = 0.0;
    for (double v : f) t += v;
    return t;
}

Tendencies scalar_decay(const State& s) { return {{-s.u[0]}, {}, {}}; }

double integrate_decay(double dt, double T) {
    State s;
    s.u = {1.0};
    const auto steps = static_cast<int>(std::lround(T / dt));
    for (int k = 0; k < steps; ++k) s = tvrk3_step(s, dt, scalar_decay);
    return s.u[0];
}

constexpr Scheme kSchemes[] = {Scheme::CD, Scheme::Weno, Scheme::WenoLinear};

}  // namespace

TEST_CASE("uniform rest state has zero tendencies") {
    for (Scheme sc : kSchemes) {
        const ModelSetup setup = setup_for(sc);
        const Tendencies t = vp_rhs(uniform(setup.grid, 1.0, 0.9), setup);
        for (double v : t.du) CHECK(v == 0.0);
        for (double v : t.dh) CHECK(v == 0.0);
        for (double v : t.da) CHECK(v == 0.0);
    }
}

TEST_CASE("uniform wind accelerates rest ice uniformly") {
    for (Scheme sc : kSchemes) {
        const ModelSetup setup = setup_for(sc, Boundary::Periodic, 40, 10.0);
        const Tendencies t = vp_rhs(uniform(setup.grid, 1.0, 0.9), setup);
        for (double v : t.du) CHECK(v == Approx(1.73333333333333333e-4).epsilon(1e-13));
    }
    const ModelSetup walled = setup_for(Scheme::CD, Boundary::DirichletZeroVelocity, 40, 10.0);
    const Tendencies t = vp_rhs(uniform(walled.grid, 1.0, 0.9), walled);
    CHECK(t.du.front() == 0.0);
    CHECK(t.du.back() == 0.0);
    CHECK(t.du[20] == Approx(1.73333333333333333e-4).epsilon(1e-13));
}

TEST_CASE("in-range potential adds nothing") {
    potential::PotentialConfig pc;
    pc.a_low.active = pc.a_high.active = pc.h_low.active = true;
    for (Scheme sc : kSchemes) {
        const ModelSetup setup = setup_for(sc, Boundary::Periodic, 40, 10.0);
        State s = smooth(setup.grid);
        std::fill(s.a.begin(), s.a.end(), 0.5);
        const Tendencies plain = vp_rhs(s, setup);
        const Tendencies forced = vp_rhs(s, setup, RhsHooks{{}, &pc});
        CHECK(plain.du == forced.du);
        CHECK(plain.dh == forced.dh);
        CHECK(plain.da == forced.da);
    }
}

TEST_CASE("TVRK3 stage arithmetic") {
    SUBCASE("zero operator") {
        State s;
        s.u = {0.3, -1.0};
        s.h = {2.0};
        s.a = {0.5};
        const State n = tvrk3_step(s, 7.0, [](const State& x) {
            return Tendencies{Field(x.u.size(), 0.0), Field(x.h.size(), 0.0), Field(x.a.size(), 0.0)};
        });
        CHECK(n.u == s.u);
        CHECK(n.h == s.h);
        CHECK(n.a == s.a);
        CHECK(n.time == 7.0);
    }
    SUBCASE("one step of exponential decay") {
        CHECK(integrate_decay(0.1, 0.1) == Approx(0.904833333333333333).epsilon(1e-15));
    }
    SUBCASE("third-order convergence") {
        const double exact = std::exp(-1.0);
        double prev = std::abs(integrate_decay(0.1, 1.0) - exact);
        for (double dt : {0.05, 0.025, 0.0125}) {
            const double e = std::abs(integrate_decay(dt, 1.0) - exact);
            CHECK(std::log2(prev / e) == Approx(3.0).epsilon(0.05));
            prev = e;
        }
    }
    SUBCASE("non-finite tendency") {
        State s;
        s.u = {1.0};
        CHECK_THROWS_AS(tvrk3_step(s, 1.0,
                                   [](const State&) {
                                       return Tendencies{{std::numeric_limits<double>::infinity()}, {}, {}};
                                   }),
                        NonFiniteError);
    }
}

TEST_CASE("rest state is a fixed point of the full loop") {
    for (Scheme sc : kSchemes) {
        SimulationConfig cfg;
        cfg.model = setup_for(sc);
        cfg.dt = 5.0;
        cfg.horizon = 500.0;
        const State s0 = uniform(cfg.model.grid, 1.0, 0.9);
        const RunResult r = simulate(s0, cfg);
        CHECK(r.status == RunStatus::Completed);
        CHECK(r.final_state.u == s0.u);
        CHECK(r.final_state.h == s0.h);
        CHECK(r.final_state.a == s0.a);
        CHECK(r.end_time == 500.0);
    }
}

TEST_CASE("periodic runs conserve mass and area") {
    for (Scheme sc : kSchemes) {
        SimulationConfig cfg;
        cfg.model = setup_for(sc, Boundary::Periodic, 100, 10.0);
        cfg.dt = 1.0;
        cfg.horizon = 1000.0;
        const State s0 = smooth(cfg.model.grid);
        const RunResult r = simulate(s0, cfg);
        REQUIRE(r.status == RunStatus::Completed);
        CHECK(r.steps == 1000);
        CHECK(std::abs(total(r.final_state.h) - total(s0.h)) <= 1e-10 * total(s0.h));
        CHECK(std::abs(total(r.final_state.a) - total(s0.a)) <= 1e-10 * total(s0.a));
    }
}

TEST_CASE("identical runs are bitwise identical") {
    SimulationConfig cfg;
    cfg.model = setup_for(Scheme::Weno, Boundary::Periodic, 64, 10.0);
    cfg.dt = 1.0;
    cfg.horizon = 200.0;
    cfg.snapshot_every = 50.0;
    cfg.keep_snapshots = true;
    const State s0 = smooth(cfg.model.grid);
    const RunResult a = simulate(s0, cfg);
    const RunResult b = simulate(s0, cfg);
    REQUIRE(a.snapshots.size() == 5);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        CHECK(a.snapshots[k].u == b.snapshots[k].u);
        CHECK(a.snapshots[k].h == b.snapshots[k].h);
        CHECK(a.snapshots[k].a == b.snapshots[k].a);
    }
}

TEST_CASE("blow-up keeps the last finite state") {
    SimulationConfig cfg;
    cfg.model = setup_for(Scheme::CD, Boundary::Periodic, 40, 10.0);
    cfg.dt = 1e7;  // far beyond the explicit limit
    cfg.horizon = 1e9;
    const RunResult r = simulate(smooth(cfg.model.grid), cfg);
    CHECK(r.status == RunStatus::BlowUp);
    REQUIRE(r.blowup_time.has_value());
    CHECK(*r.blowup_time == r.end_time);
    CHECK(r.end_time < cfg.horizon);
    CHECK_FALSE(validate_state(r.final_state, cfg.model.grid).has_value());
    CHECK(r.diffusion_warning);
}

TEST_CASE("configuration checks") {
    SimulationConfig cfg;
    cfg.model = setup_for(Scheme::CD);
    const State s0 = uniform(cfg.model.grid, 1.0, 0.9);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(simulate(s0, cfg), ConfigError);
    cfg.dt = 1.0;
    cfg.model.scheme = Scheme::Weno;  // collocated scheme on a staggered grid
    CHECK_THROWS_AS(simulate(s0, cfg), ConfigError);
    cfg.model = setup_for(Scheme::Weno);
    cfg.integrator = Integrator::BackwardEulerJfnk;
    CHECK_THROWS_AS(simulate(uniform(cfg.model.grid, 1.0, 0.9), cfg), ConfigError);
}
