/// @file jfnk.hpp
/// @brief Backward-Euler momentum solve by damped Newton iteration.
///
/// Jacobian-vector products are one-sided finite differences of the
/// residual. In 1D the Jacobian is small enough to assemble column by column
/// from basis-vector actions and factor directly, so no Krylov solver is used.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "icefloe/core.hpp"
#include "icefloe/model.hpp"

namespace icefloe::jfnk {

struct NewtonConfig {
    int k_max = 150;
    double gamma_nl = 1e-6;
    double fd_eps = 1e-7;
    std::vector<double> lambda_schedule{1.0, 0.5, 0.25, 0.125};
};

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
    /// ||F(u^(k))|| for k = 0..iterations.
    std::vector<double> residual_norms;
    /// Damping accepted at each iteration.
    std::vector<double> lambdas;
    /// Whether the accepted step reduced ||F||; false only when the schedule
    /// was exhausted and the last damping was taken regardless.
    std::vector<bool> decreased;
};

using ResidualFn = std::function<Field(std::span<const double>)>;

double l2_norm(std::span<const double> v);

/// (F(u + eps v) - F(u)) / eps. The overload reuses an already computed F(u).
Field jacobian_action(const ResidualFn& F, std::span<const double> u, std::span<const double> v,
                      double fd_eps);
Field jacobian_action(const ResidualFn& F, std::span<const double> u, std::span<const double> v,
                      double fd_eps, std::span<const double> F_u);

/// Dense Jacobian whose column j is the action on the basis vector e_j.
Eigen::MatrixXd assemble_jacobian(const ResidualFn& F, std::span<const double> u, double fd_eps);
Eigen::MatrixXd assemble_jacobian(const ResidualFn& F, std::span<const double> u, double fd_eps,
                                  std::span<const double> F_u);

/// Largest |i - j| over entries with |J_ij| > tol.
std::size_t half_bandwidth(const Eigen::MatrixXd& J, double tol = 0.0);

struct NewtonResult {
    Field u;
    NewtonReport report;
};

/// Algorithm: solve J du = -F, try u + lambda du for lambda along the
/// schedule until ||F|| drops (or the schedule ends), stop once
/// ||F|| < gamma_nl ||F(u0)||. Returns immediately when ||F(u0)|| is below
/// 1e-14 * n.
NewtonResult newton_solve(const ResidualFn& F, Field u0, const NewtonConfig& cfg);

/// Backward-Euler momentum residual on the C-grid (CD scheme):
/// rho h (u - u_prev)/dt - tau_a + tau_w(u) - dsigma(u, h_prev, A_prev)/dx
/// at interior vertices. Dirichlet boundary rows are u_b = 0; on a periodic
/// grid the last row ties u_n to u_0.
Field momentum_residual(std::span<const double> u_cand, const State& prev, double dt,
                        const ModelSetup& setup);

/// Solves for the velocity at the new level, starting from prev.u.
NewtonResult jfnk_solve(const State& prev, double dt, const ModelSetup& setup,
                        const NewtonConfig& cfg);

}  // namespace icefloe::jfnk
