#include "icefloe/cd_operators.hpp"

#include <string>

namespace icefloe::cd {

namespace {

void require_staggered(std::size_t vertices, std::size_t centers, const char* op) {
    if (vertices != centers + 1) {
        throw ConfigError(std::string(op) + ": layout mismatch, expected " +
                          std::to_string(centers + 1) + " vertex values, got " +
                          std::to_string(vertices));
    }
}

}  // namespace

Field center_from_vertex(std::span<const double> h_center, Boundary boundary) {
    const std::size_t n = h_center.size();
    if (n == 0) throw ConfigError("center_from_vertex: empty field");
    Field v(n + 1);
    for (std::size_t i = 1; i < n; ++i) {
        v[i] = 0.5 * (h_center[i] + h_center[i - 1]);
    }
    if (boundary == Boundary::Periodic) {
        v[0] = 0.5 * (h_center[0] + h_center[n - 1]);
        v[n] = v[0];
    } else {
        v[0] = h_center[0];
        v[n] = h_center[n - 1];
    }
    return v;
}

Field center_gradient(std::span<const double> u_vertex, double dx) {
    if (u_vertex.size() < 2) throw ConfigError("center_gradient: need at least two vertices");
    const std::size_t n = u_vertex.size() - 1;
    Field g(n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = (u_vertex[j + 1] - u_vertex[j]) / dx;
    }
    return g;
}

Field vertex_divergence(std::span<const double> sigma_center, double dx, Boundary boundary) {
    const std::size_t n = sigma_center.size();
    if (n == 0) throw ConfigError("vertex_divergence: empty field");
    Field d(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        d[i] = (sigma_center[i] - sigma_center[i - 1]) / dx;
    }
    if (boundary == Boundary::Periodic) {
        d[0] = (sigma_center[0] - sigma_center[n - 1]) / dx;
        d[n] = d[0];
    }
    return d;
}

Field transport_divergence(std::span<const double> u_vertex, std::span<const double> q_center,
                           double dx, Boundary boundary) {
    const std::size_t n = q_center.size();
    require_staggered(u_vertex.size(), n, "transport_divergence");
    const Field qv = center_from_vertex(q_center, boundary);

    // flux[i] lives on vertex i; only vertices 0..n-1 are needed when wrapping.
    Field flux(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        flux[i] = u_vertex[i] * qv[i];
    }
    if (boundary == Boundary::Periodic) {
        flux[n] = flux[0];
    } else {
        flux[0] = 0.0;
        flux[n] = 0.0;
    }
    Field d(n);
    for (std::size_t j = 0; j < n; ++j) {
        d[j] = (flux[j + 1] - flux[j]) / dx;
    }
    return d;
}

}  // namespace icefloe::cd
