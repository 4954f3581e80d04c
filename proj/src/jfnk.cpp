#include "icefloe/jfnk.hpp"

#include <cmath>
#include <limits>

#include "icefloe/cd_operators.hpp"
#include "icefloe/rheology.hpp"

namespace icefloe::jfnk {

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Field jacobian_action(const ResidualFn& F, std::span<const double> u, std::span<const double> v,
                      double fd_eps) {
    const Field f0 = F(u);
    return jacobian_action(F, u, v, fd_eps, f0);
}

Field jacobian_action(const ResidualFn& F, std::span<const double> u, std::span<const double> v,
                      double fd_eps, std::span<const double> F_u) {
    Field shifted(u.begin(), u.end());
    for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += fd_eps * v[i];
    Field out = F(shifted);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - F_u[i]) / fd_eps;
    return out;
}

Eigen::MatrixXd assemble_jacobian(const ResidualFn& F, std::span<const double> u, double fd_eps) {
    const Field f0 = F(u);
    return assemble_jacobian(F, u, fd_eps, f0);
}

Eigen::MatrixXd assemble_jacobian(const ResidualFn& F, std::span<const double> u, double fd_eps,
                                  std::span<const double> F_u) {
    const std::size_t n = u.size();
    Eigen::MatrixXd J(static_cast<Eigen::Index>(F_u.size()), static_cast<Eigen::Index>(n));
    Field basis(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j] = 1.0;
        const Field col = jacobian_action(F, u, basis, fd_eps, F_u);
        basis[j] = 0.0;
        for (std::size_t i = 0; i < col.size(); ++i) {
            J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        }
    }
    return J;
}

std::size_t half_bandwidth(const Eigen::MatrixXd& J, double tol) {
    std::size_t bw = 0;
    for (Eigen::Index i = 0; i < J.rows(); ++i) {
        for (Eigen::Index j = 0; j < J.cols(); ++j) {
            if (std::abs(J(i, j)) > tol) {
                bw = std::max(bw, static_cast<std::size_t>(std::abs(i - j)));
            }
        }
    }
    return bw;
}

NewtonResult newton_solve(const ResidualFn& F, Field u0, const NewtonConfig& cfg) {
    NewtonResult result;
    NewtonReport& rep = result.report;
    Field u = std::move(u0);
    Field f = F(u);
    double norm = l2_norm(f);
    rep.initial_norm = norm;
    rep.residual_norms.push_back(norm);

    const auto finish = [&](bool converged) {
        rep.converged = converged;
        rep.final_norm = norm;
        result.u = std::move(u);
        return std::move(result);
    };

    if (!std::isfinite(norm)) return finish(false);
    if (norm < 1e-14 * static_cast<double>(u.size())) return finish(true);

    const double target = cfg.gamma_nl * rep.initial_norm;
    const auto n = static_cast<Eigen::Index>(u.size());
    for (int k = 1; k <= cfg.k_max; ++k) {
        const Eigen::MatrixXd J = assemble_jacobian(F, u, cfg.fd_eps, f);
        const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(f.data(), n);
        const Eigen::VectorXd step = J.partialPivLu().solve(rhs);

        Field trial(u.size());
        Field f_trial;
        double trial_norm = std::numeric_limits<double>::infinity();
        double lambda = cfg.lambda_schedule.back();
        bool decreased = false;
        for (double lam : cfg.lambda_schedule) {
            for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + lam * step(static_cast<Eigen::Index>(i));
            f_trial = F(trial);
            trial_norm = l2_norm(f_trial);
            if (!std::isfinite(trial_norm)) trial_norm = std::numeric_limits<double>::infinity();
            lambda = lam;
            if (trial_norm < norm) {
                decreased = true;
                break;
            }
        }
        u = trial;
        f = std::move(f_trial);
        norm = trial_norm;
        rep.iterations = k;
        rep.lambdas.push_back(lambda);
        rep.decreased.push_back(decreased);
        rep.residual_norms.push_back(norm);

        if (!std::isfinite(norm)) return finish(false);
        if (norm < target) return finish(true);
    }
    return finish(false);
}

Field momentum_residual(std::span<const double> u_cand, const State& prev, double dt,
                        const ModelSetup& setup) {
    const Grid& g = setup.grid;
    if (setup.scheme != Scheme::CD || g.layout != Layout::StaggeredCGrid) {
        throw ConfigError("momentum_residual: implicit momentum solve uses CD on the C-grid");
    }
    if (u_cand.size() != g.u_slots() || prev.u.size() != g.u_slots()) {
        throw ConfigError("momentum_residual: velocity size does not match the grid");
    }
    for (double v : u_cand) {
        if (!std::isfinite(v)) throw ConfigError("momentum_residual: non-finite candidate velocity");
    }
    const PhysParams& p = setup.params;
    const Field du_dx = cd::center_gradient(u_cand, g.dx);
    const Field sigma = rheology::stress_field(du_dx, prev.h, prev.a, p);
    const Field dsigma = cd::vertex_divergence(sigma, g.dx, g.boundary);
    const Field h_u = cd::center_from_vertex(prev.h, g.boundary);
    const double tau_a = rheology::wind_stress(setup.wind, p);

    const std::size_t n = u_cand.size();
    Field F(n);
    for (std::size_t i = 0; i < n; ++i) {
        F[i] = p.rho_ice * h_u[i] * (u_cand[i] - prev.u[i]) / dt - tau_a +
               rheology::water_stress(u_cand[i], p) - dsigma[i];
    }
    if (g.periodic()) {
        F[n - 1] = u_cand[n - 1] - u_cand[0];
    } else {
        F[0] = u_cand[0];
        F[n - 1] = u_cand[n - 1];
    }
    return F;
}

NewtonResult jfnk_solve(const State& prev, double dt, const ModelSetup& setup,
                        const NewtonConfig& cfg) {
    const ResidualFn F = [&](std::span<const double> u) {
        // A diverging trial step yields an infinite norm, which the line search rejects.
        for (double v : u) {
            if (!std::isfinite(v)) return Field(u.size(), std::numeric_limits<double>::quiet_NaN());
        }
        return momentum_residual(u, prev, dt, setup);
    };
    return newton_solve(F, prev.u, cfg);
}

}  // namespace icefloe::jfnk
