#include "icefloe/rheology.hpp"

#include <cmath>

namespace icefloe::rheology {

double ice_strength(double h, double a, const PhysParams& p) {
    return p.p_star * h * std::exp(-p.conc_c * (1.0 - a));
}

double strain_delta(double du_dx, const PhysParams& p) {
    return std::sqrt(p.ellipse_factor() * (du_dx * du_dx + p.eps2));
}

Viscosities viscosities(double pressure, double delta, const PhysParams& p) {
    const double zeta = pressure / (2.0 * p.delta_min) * std::tanh(p.delta_min / delta);
    return {zeta, zeta / (p.ellipse_e * p.ellipse_e)};
}

double wind_stress(double u_air, const PhysParams& p) {
    return p.rho_air * p.c_da * std::abs(u_air) * u_air;
}

double water_stress(double u, const PhysParams& p) {
    return p.rho_water * p.c_dw * std::sqrt(u * u + p.eps1) * u;
}

RheologyFields evaluate(std::span<const double> du_dx, std::span<const double> h,
                        std::span<const double> a, const PhysParams& p) {
    if (du_dx.size() != h.size() || h.size() != a.size()) {
        throw ConfigError("rheology: strain, h and A must share the center layout");
    }
    const std::size_t n = h.size();
    RheologyFields r;
    r.delta.resize(n);
    r.zeta.resize(n);
    r.eta.resize(n);
    r.pressure.resize(n);
    r.sigma.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        r.pressure[j] = ice_strength(h[j], a[j], p);
        r.delta[j] = strain_delta(du_dx[j], p);
        const auto v = viscosities(r.pressure[j], r.delta[j], p);
        r.zeta[j] = v.zeta;
        r.eta[j] = v.eta;
        r.sigma[j] = stress(v.zeta, v.eta, du_dx[j], r.pressure[j]);
    }
    return r;
}

Field stress_field(std::span<const double> du_dx, std::span<const double> h,
                   std::span<const double> a, const PhysParams& p) {
    if (du_dx.size() != h.size() || h.size() != a.size()) {
        throw ConfigError("rheology: strain, h and A must share the center layout");
    }
    Field sigma(h.size());
    for (std::size_t j = 0; j < h.size(); ++j) {
        const double pressure = ice_strength(h[j], a[j], p);
        const auto v = viscosities(pressure, strain_delta(du_dx[j], p), p);
        sigma[j] = stress(v.zeta, v.eta, du_dx[j], pressure);
    }
    return sigma;
}

}  // namespace icefloe::rheology
