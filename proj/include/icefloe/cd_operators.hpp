/// @file cd_operators.hpp
/// @brief Second-order centered differences on the 1D Arakawa C-grid.
///
/// Vertex fields have n+1 entries (x_i = i dx), center fields have n entries
/// (x_{i+1/2}). Periodic closures wrap indices instead of filling ghost
/// cells, so flux differences telescope exactly.
#pragma once

#include <span>

#include "icefloe/core.hpp"

namespace icefloe::cd {

/// Vertex values from centers: interior vertices average their two
/// neighbours; boundary vertices wrap (periodic) or copy the adjacent center
/// (Dirichlet).
Field center_from_vertex(std::span<const double> h_center, Boundary boundary);

/// (u_{i+1} - u_i)/dx at each center.
Field center_gradient(std::span<const double> u_vertex, double dx);

/// (s_{i+1/2} - s_{i-1/2})/dx at each vertex. Periodic: vertices 0 and n wrap
/// and hold the same value. Dirichlet: boundary entries are 0 (velocity is
/// pinned there, the value is never used).
Field vertex_divergence(std::span<const double> sigma_center, double dx, Boundary boundary);

/// Flux-form d(u q)/dx at centers, with q moved to vertices by
/// center_from_vertex. Dirichlet closes the domain with zero boundary flux.
Field transport_divergence(std::span<const double> u_vertex, std::span<const double> q_center,
                           double dx, Boundary boundary);

}  // namespace icefloe::cd
