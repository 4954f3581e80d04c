/// @file model.hpp
/// @brief Scheme-dispatched spatial operators of the 1D VP system.
///
/// CD runs on the staggered C-grid, WENO variants on the collocated grid.
/// Every solver (explicit, JFNK, EVP) assembles its terms from these.
#pragma once

#include <span>

#include "icefloe/core.hpp"
#include "icefloe/weno.hpp"

namespace icefloe {

/// Lower bound on h used only where the momentum equation divides by rho h.
inline constexpr double kMassFloor = 1e-6;

struct ModelSetup {
    Grid grid;
    PhysParams params;
    Scheme scheme = Scheme::CD;
    /// Smoothness regulariser for WENO weights; the mode follows `scheme`.
    double weno_eps = 1e-6;
    /// Uniform surface wind u_a, m/s.
    double wind = 0.0;

    [[nodiscard]] weno::WenoConfig weno() const { return weno::config_for(scheme, weno_eps); }
};

/// Throws ConfigError when the scheme does not match the grid layout or a
/// WENO scheme is paired with a non-periodic boundary.
void check_compatible(const ModelSetup& setup);

/// du/dx at cell centers: CD center gradient, or left-biased WENO derivative.
Field strain_rate(std::span<const double> u, const ModelSetup& setup);

/// d(sigma)/dx at velocity slots: CD vertex divergence, or right-biased WENO.
Field stress_divergence(std::span<const double> sigma, const ModelSetup& setup);

/// Thickness at velocity slots (vertex average on the C-grid).
Field thickness_at_u(std::span<const double> h, const ModelSetup& setup);

/// d(u q)/dx at centers with the scheme's transport operator.
Field transport_divergence(std::span<const double> u, std::span<const double> q,
                           const ModelSetup& setup);

/// Second-order strain rate at centers used by the gamma-range analysis:
/// CD center gradient on the C-grid, centered difference when collocated.
Field linear_strain_rate(std::span<const double> u, const ModelSetup& setup);

/// Enforces the velocity-slot boundary rule on a velocity or velocity
/// tendency: zero at both ends under Dirichlet, last slot mirrors the first
/// on a periodic C-grid.
void apply_velocity_boundary(std::span<double> u, const ModelSetup& setup);

}  // namespace icefloe
