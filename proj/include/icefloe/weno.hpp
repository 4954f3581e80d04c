/// @file weno.hpp
/// @brief Fifth-order finite-difference WENO (Jiang-Shu) on the collocated grid.
///
/// A left-biased reconstruction at x_{i+1/2} uses v_{i-2..i+2}; a right-biased
/// one uses v_{i-1..i+3} and is the mirror image of the left formula. Linear
/// mode freezes the weights at their optimal values (1/10, 6/10, 3/10).
/// Only periodic grids are supported.
#pragma once

#include <array>
#include <span>

#include "icefloe/core.hpp"

namespace icefloe::weno {

enum class Mode { Nonlinear, Linear };
enum class Bias { Left, Right };

struct WenoConfig {
    Mode mode = Mode::Nonlinear;
    double smoothness_eps = 1e-6;
};

inline constexpr std::array<double, 3> kLinearWeights{0.1, 0.6, 0.3};

/// Weights of the three candidate stencils for a left-biased stencil
/// v_{i-2..i+2}, ordered from the most upwind candidate.
std::array<double, 3> weights(std::span<const double, 5> v, const WenoConfig& cfg);

/// Reconstructed value at x_{i+1/2}. For Left bias pass v_{i-2..i+2}; for
/// Right bias pass v_{i-1..i+3}. Throws ConfigError on non-finite input.
double interface_value(std::span<const double, 5> v, Bias bias, const WenoConfig& cfg);

/// (v_{i+1/2} - v_{i-1/2})/dx using biased reconstructions of the field itself.
Field derivative(std::span<const double> field, Bias bias, double dx, const WenoConfig& cfg,
                 Boundary boundary = Boundary::Periodic);

/// Conservative (f_{i+1/2} - f_{i-1/2})/dx for f = u q with global
/// Lax-Friedrichs splitting, alpha = max |u|.
Field flux_divergence(std::span<const double> u, std::span<const double> q, double dx,
                      const WenoConfig& cfg, Boundary boundary = Boundary::Periodic);

/// Maps the scheme enum to a WENO configuration (mode only).
WenoConfig config_for(Scheme scheme, double smoothness_eps = 1e-6);

}  // namespace icefloe::weno
