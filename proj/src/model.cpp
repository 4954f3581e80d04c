#include "icefloe/model.hpp"

#include "icefloe/cd_operators.hpp"

namespace icefloe {

void check_compatible(const ModelSetup& setup) {
    if (setup.grid.layout != layout_for(setup.scheme)) {
        throw ConfigError(std::string("scheme ") + to_string(setup.scheme) +
                          " does not match the grid layout");
    }
    if (setup.scheme != Scheme::CD && !setup.grid.periodic()) {
        throw ConfigError("WENO schemes support periodic boundaries only");
    }
}

Field strain_rate(std::span<const double> u, const ModelSetup& setup) {
    if (setup.scheme == Scheme::CD) return cd::center_gradient(u, setup.grid.dx);
    return weno::derivative(u, weno::Bias::Left, setup.grid.dx, setup.weno(), setup.grid.boundary);
}

Field stress_divergence(std::span<const double> sigma, const ModelSetup& setup) {
    if (setup.scheme == Scheme::CD) {
        return cd::vertex_divergence(sigma, setup.grid.dx, setup.grid.boundary);
    }
    return weno::derivative(sigma, weno::Bias::Right, setup.grid.dx, setup.weno(),
                            setup.grid.boundary);
}

Field thickness_at_u(std::span<const double> h, const ModelSetup& setup) {
    if (setup.grid.layout == Layout::StaggeredCGrid) {
        return cd::center_from_vertex(h, setup.grid.boundary);
    }
    return Field(h.begin(), h.end());
}

Field transport_divergence(std::span<const double> u, std::span<const double> q,
                           const ModelSetup& setup) {
    if (setup.scheme == Scheme::CD) {
        return cd::transport_divergence(u, q, setup.grid.dx, setup.grid.boundary);
    }
    return weno::flux_divergence(u, q, setup.grid.dx, setup.weno(), setup.grid.boundary);
}

Field linear_strain_rate(std::span<const double> u, const ModelSetup& setup) {
    if (setup.grid.layout == Layout::StaggeredCGrid) return cd::center_gradient(u, setup.grid.dx);
    const std::size_t n = u.size();
    Field g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jp = (j + 1) % n;
        const std::size_t jm = (j + n - 1) % n;
        g[j] = (u[jp] - u[jm]) / (2.0 * setup.grid.dx);
    }
    return g;
}

void apply_velocity_boundary(std::span<double> u, const ModelSetup& setup) {
    if (setup.grid.layout != Layout::StaggeredCGrid || u.empty()) return;
    if (setup.grid.periodic()) {
        u.back() = u.front();
    } else {
        u.front() = 0.0;
        u.back() = 0.0;
    }
}

}  // namespace icefloe
