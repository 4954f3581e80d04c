/// @file mms.hpp
/// @brief Manufactured-solution verification of the spatial schemes.
///
/// The truth is a single travelling sine wave shared by u, h and A on the
/// periodic 2000 km domain. The forcing that makes it an exact solution is
/// derived by hand (chain rule through P, Delta, zeta and sigma) and added
/// to the right-hand side, frozen over the TVRK3 stages of each step.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icefloe/core.hpp"
#include "icefloe/explicit_driver.hpp"

namespace icefloe::mms {

inline constexpr double kDomainLength = 2.0e6;       // m
inline constexpr double kPhaseSpeed = 5.0 / 518400.0;  // rad/s

struct Truth {
    double u = 0.0;
    double h = 0.0;
    double a = 0.0;
};

Truth manufactured_truth(double x, double t);

/// First space and time derivatives (and u_xx) of the truth.
struct TruthDerivatives {
    double u_x = 0.0, u_xx = 0.0, u_t = 0.0;
    double h_x = 0.0, h_t = 0.0;
    double a_x = 0.0, a_t = 0.0;
};

TruthDerivatives truth_derivatives(double x, double t);

/// (F_u, F_h, F_A) at (x, t):
/// F_u = rho h u_t - tau_a + tau_w(u) - d(sigma)/dx, F_h = h_t + (u h)_x,
/// F_A = A_t + (u A)_x, all on the closed-form truth.
std::array<double, 3> mms_forcing(double x, double t, const PhysParams& p, double wind);

/// Binds parameters and wind into a ForcingFn for the solvers.
ForcingFn make_forcing(const PhysParams& p, double wind);

/// ||numeric - exact||_2 / ||exact||_2 over grid values. Throws ConfigError
/// on size mismatch or a zero exact norm.
double relative_l2_error(std::span<const double> numeric, std::span<const double> exact);

/// Truth sampled at the native locations of a grid.
State truth_state(const Grid& grid, double t);

struct MmsErrors {
    std::size_t n_cells = 0;
    double dx = 0.0;
    double err_u = 0.0;
    double err_h = 0.0;
    double err_a = 0.0;
    bool completed = false;
    std::string message;
};

struct MmsOptions {
    double dt = 1e-4;
    double horizon = 5.0;
    double wind = 10.0;
    double weno_eps = 1e-6;
    PhysParams params{};
};

/// One forced periodic run at n_cells, errors against truth at the final time.
MmsErrors run_mms(Scheme scheme, std::size_t n_cells, const MmsOptions& opts = {});

struct ConvergenceRow {
    double dx = 0.0;
    double err_u = 0.0, err_h = 0.0, err_a = 0.0;
    std::optional<double> rate_u, rate_h, rate_a;
};

/// log2(err_coarse / err_fine).
double observed_rate(double err_coarse, double err_fine);

/// Rows from per-resolution errors ordered coarse to fine.
std::vector<ConvergenceRow> convergence_table(const std::vector<MmsErrors>& runs);

/// Runs every resolution (optionally in parallel) and tabulates rates.
/// Throws std::runtime_error if any resolution blows up.
std::vector<ConvergenceRow> convergence_study(Scheme scheme,
                                              std::vector<std::size_t> resolutions = {50, 100, 200},
                                              const MmsOptions& opts = {}, bool parallel = true);

/// CSV text with header dx,err_u,err_h,err_a,rate_u,rate_h,rate_a; empty rate
/// fields on the coarsest row.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

}  // namespace icefloe::mms
