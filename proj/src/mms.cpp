#include "icefloe/mms.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <stdexcept>

#include "icefloe/rheology.hpp"
#include "icefloe/simulation.hpp"

namespace icefloe::mms {

namespace {

constexpr double kWaveNumber = 2.0 * std::numbers::pi / kDomainLength;

double phase(double x, double t) { return kWaveNumber * x + kPhaseSpeed * t - 0.5 * std::numbers::pi; }

}  // namespace

Truth manufactured_truth(double x, double t) {
    const double s = std::sin(phase(x, t)) + 1.0;
    return {s * 0.001 + 0.2, s + 0.1, s * 0.15 + 0.7};
}

TruthDerivatives truth_derivatives(double x, double t) {
    const double ph = phase(x, t);
    const double s = std::sin(ph);
    const double c = std::cos(ph);
    const double k = kWaveNumber;
    const double w = kPhaseSpeed;
    TruthDerivatives d;
    d.u_x = 0.001 * k * c;
    d.u_xx = -0.001 * k * k * s;
    d.u_t = 0.001 * w * c;
    d.h_x = k * c;
    d.h_t = w * c;
    d.a_x = 0.15 * k * c;
    d.a_t = 0.15 * w * c;
    return d;
}

std::array<double, 3> mms_forcing(double x, double t, const PhysParams& p, double wind) {
    const Truth q = manufactured_truth(x, t);
    const TruthDerivatives d = truth_derivatives(x, t);

    // Strength and its gradient.
    const double decay = std::exp(-p.conc_c * (1.0 - q.a));
    const double pressure = p.p_star * q.h * decay;
    const double pressure_x = p.p_star * decay * (d.h_x + p.conc_c * q.h * d.a_x);

    // Strain measure and its gradient.
    const double kfac = p.ellipse_factor();
    const double delta = std::sqrt(kfac * (d.u_x * d.u_x + p.eps2));
    const double delta_x = kfac * d.u_x * d.u_xx / delta;

    // zeta = P/(2 dmin) tanh(dmin/Delta).
    const double th = std::tanh(p.delta_min / delta);
    const double zeta = pressure / (2.0 * p.delta_min) * th;
    const double zeta_x = pressure_x / (2.0 * p.delta_min) * th -
                          pressure * (1.0 - th * th) * delta_x / (2.0 * delta * delta);

    // sigma = (1 + e^-2) zeta u_x - P/2.
    const double sigma_x = kfac * (zeta_x * d.u_x + zeta * d.u_xx) - 0.5 * pressure_x;

    const double f_u = p.rho_ice * q.h * d.u_t - rheology::wind_stress(wind, p) +
                       rheology::water_stress(q.u, p) - sigma_x;
    const double f_h = d.h_t + d.u_x * q.h + q.u * d.h_x;
    const double f_a = d.a_t + d.u_x * q.a + q.u * d.a_x;
    return {f_u, f_h, f_a};
}

ForcingFn make_forcing(const PhysParams& p, double wind) {
    return [p, wind](double x, double t) { return mms_forcing(x, t, p, wind); };
}

double relative_l2_error(std::span<const double> numeric, std::span<const double> exact) {
    if (numeric.size() != exact.size()) throw ConfigError("relative_l2_error: length mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double d = numeric[i] - exact[i];
        num += d * d;
        den += exact[i] * exact[i];
    }
    if (den == 0.0) throw ConfigError("relative_l2_error: exact field has zero norm");
    return std::sqrt(num / den);
}

State truth_state(const Grid& grid, double t) {
    State s = make_state(grid);
    s.time = t;
    for (std::size_t i = 0; i < s.u.size(); ++i) s.u[i] = manufactured_truth(grid.u_x(i), t).u;
    for (std::size_t j = 0; j < s.h.size(); ++j) {
        const Truth q = manufactured_truth(grid.center_x(j), t);
        s.h[j] = q.h;
        s.a[j] = q.a;
    }
    return s;
}

MmsErrors run_mms(Scheme scheme, std::size_t n_cells, const MmsOptions& opts) {
    SimulationConfig cfg;
    cfg.model.grid = make_grid(n_cells, kDomainLength / static_cast<double>(n_cells), layout_for(scheme),
                               Boundary::Periodic);
    cfg.model.params = opts.params;
    cfg.model.scheme = scheme;
    cfg.model.weno_eps = opts.weno_eps;
    cfg.model.wind = opts.wind;
    cfg.integrator = Integrator::Tvrk3Explicit;
    cfg.dt = opts.dt;
    cfg.horizon = opts.horizon;
    cfg.mms_forcing = make_forcing(opts.params, opts.wind);

    const RunResult r = simulate(truth_state(cfg.model.grid, 0.0), cfg);

    MmsErrors e;
    e.n_cells = n_cells;
    e.dx = cfg.model.grid.dx;
    e.completed = r.status == RunStatus::Completed;
    e.message = r.message;
    const State exact = truth_state(cfg.model.grid, r.end_time);
    // A periodic C-grid stores vertex 0 twice; compare the n distinct vertices.
    const std::size_t nu = n_cells;
    e.err_u = relative_l2_error(std::span(r.final_state.u).first(nu), std::span(exact.u).first(nu));
    e.err_h = relative_l2_error(r.final_state.h, exact.h);
    e.err_a = relative_l2_error(r.final_state.a, exact.a);
    return e;
}

double observed_rate(double err_coarse, double err_fine) { return std::log2(err_coarse / err_fine); }

std::vector<ConvergenceRow> convergence_table(const std::vector<MmsErrors>& runs) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        ConvergenceRow row;
        row.dx = runs[i].dx;
        row.err_u = runs[i].err_u;
        row.err_h = runs[i].err_h;
        row.err_a = runs[i].err_a;
        if (i > 0) {
            row.rate_u = observed_rate(runs[i - 1].err_u, row.err_u);
            row.rate_h = observed_rate(runs[i - 1].err_h, row.err_h);
            row.rate_a = observed_rate(runs[i - 1].err_a, row.err_a);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(Scheme scheme, std::vector<std::size_t> resolutions,
                                              const MmsOptions& opts, bool parallel) {
    std::vector<MmsErrors> runs;
    if (parallel) {
        std::vector<std::future<MmsErrors>> jobs;
        for (std::size_t n : resolutions) {
            jobs.push_back(std::async(std::launch::async, [=] { return run_mms(scheme, n, opts); }));
        }
        for (auto& j : jobs) runs.push_back(j.get());
    } else {
        for (std::size_t n : resolutions) runs.push_back(run_mms(scheme, n, opts));
    }
    for (const auto& r : runs) {
        if (!r.completed) {
            throw std::runtime_error("manufactured-solution run at " + std::to_string(r.n_cells) +
                                     " cells did not complete: " + r.message);
        }
    }
    return convergence_table(runs);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "dx,err_u,err_h,err_a,rate_u,rate_h,rate_a\n";
    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    const auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    for (const auto& r : rows) {
        out += num(r.dx) + "," + num(r.err_u) + "," + num(r.err_h) + "," + num(r.err_a) + "," +
               opt(r.rate_u) + "," + opt(r.rate_h) + "," + opt(r.rate_a) + "\n";
    }
    return out;
}

}  // namespace icefloe::mms
