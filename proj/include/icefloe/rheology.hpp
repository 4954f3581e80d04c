/// @file rheology.hpp
/// @brief Pointwise VP closures: strength, strain measure, viscosities, stress, drag.
///
/// Every closure is total. Out-of-range h or A (negative thickness, A > 1) are
/// evaluated as-is; bounding them is the job of the potential forcing.
#pragma once

#include <span>
#include <utility>

#include "icefloe/core.hpp"

namespace icefloe::rheology {

/// P = P* h exp(-C (1 - A)).
double ice_strength(double h, double a, const PhysParams& p);

/// Delta = sqrt((1 + e^-2) (du_dx^2 + eps2)).
double strain_delta(double du_dx, const PhysParams& p);

struct Viscosities {
    double zeta = 0.0;
    double eta = 0.0;
};

/// tanh-regularised bulk viscosity and the matching shear viscosity eta = zeta e^-2.
Viscosities viscosities(double pressure, double delta, const PhysParams& p);

/// sigma = (eta + zeta) du_dx - P/2.
inline double stress(double zeta, double eta, double du_dx, double pressure) {
    return (eta + zeta) * du_dx - 0.5 * pressure;
}

/// Quadratic air drag rho_a C_da |u_a| u_a.
double wind_stress(double u_air, const PhysParams& p);

/// Regularised quadratic water drag rho_w C_dw sqrt(u^2 + eps1) u (ocean at rest).
double water_stress(double u, const PhysParams& p);

/// Evaluates the whole closure chain cell by cell.
RheologyFields evaluate(std::span<const double> du_dx, std::span<const double> h,
                        std::span<const double> a, const PhysParams& p);

/// Stress only; the hot path of the explicit solvers.
Field stress_field(std::span<const double> du_dx, std::span<const double> h,
                   std::span<const double> a, const PhysParams& p);

}  // namespace icefloe::rheology
