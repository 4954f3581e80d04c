#include "icefloe/weno.hpp"

#include <algorithm>
#include <cmath>

namespace icefloe::weno {

namespace {

struct Candidates {
    std::array<double, 3> q;
    std::array<double, 3> beta;
};

// Left-biased candidates for x_{i+1/2} from v = (v_{i-2}, ..., v_{i+2}).
Candidates candidates(std::span<const double, 5> v) {
    Candidates c;
    c.q[0] = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0;
    c.q[1] = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0;
    c.q[2] = (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0;

    const double d0 = v[0] - 2.0 * v[1] + v[2];
    const double d1 = v[1] - 2.0 * v[2] + v[3];
    const double d2 = v[2] - 2.0 * v[3] + v[4];
    const double s0 = v[0] - 4.0 * v[1] + 3.0 * v[2];
    const double s1 = v[1] - v[3];
    const double s2 = 3.0 * v[2] - 4.0 * v[3] + v[4];
    c.beta[0] = 13.0 / 12.0 * d0 * d0 + 0.25 * s0 * s0;
    c.beta[1] = 13.0 / 12.0 * d1 * d1 + 0.25 * s1 * s1;
    c.beta[2] = 13.0 / 12.0 * d2 * d2 + 0.25 * s2 * s2;
    return c;
}

std::array<double, 3> weights_from(const Candidates& c, const WenoConfig& cfg) {
    if (cfg.mode == Mode::Linear) return kLinearWeights;
    std::array<double, 3> alpha{};
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = cfg.smoothness_eps + c.beta[k];
        alpha[k] = kLinearWeights[k] / (d * d);
        sum += alpha[k];
    }
    for (auto& w : alpha) w /= sum;
    return alpha;
}

double reconstruct_left(std::span<const double, 5> v, const WenoConfig& cfg) {
    const auto c = candidates(v);
    const auto w = weights_from(c, cfg);
    return w[0] * c.q[0] + w[1] * c.q[1] + w[2] * c.q[2];
}

double reconstruct(std::span<const double, 5> v, Bias bias, const WenoConfig& cfg) {
    if (bias == Bias::Left) return reconstruct_left(v, cfg);
    const std::array<double, 5> mirrored{v[4], v[3], v[2], v[1], v[0]};
    return reconstruct_left(mirrored, cfg);
}

void require_periodic(Boundary boundary, const char* op) {
    if (boundary != Boundary::Periodic) {
        throw ConfigError(std::string(op) + ": WENO operators support periodic boundaries only");
    }
}

// Interface values v_{i+1/2}, i = 0..n-1, with wrapped stencils.
Field interfaces(std::span<const double> f, Bias bias, const WenoConfig& cfg) {
    const std::size_t n = f.size();
    const auto at = [&](std::ptrdiff_t k) {
        const auto m = static_cast<std::ptrdiff_t>(n);
        return f[static_cast<std::size_t>(((k % m) + m) % m)];
    };
    Field out(n);
    std::array<double, 5> s{};
    const std::ptrdiff_t first = bias == Bias::Left ? -2 : -1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i);
        for (std::ptrdiff_t k = 0; k < 5; ++k) s[static_cast<std::size_t>(k)] = at(ii + first + k);
        out[i] = reconstruct(s, bias, cfg);
    }
    return out;
}

}  // namespace

std::array<double, 3> weights(std::span<const double, 5> v, const WenoConfig& cfg) {
    return weights_from(candidates(v), cfg);
}

double interface_value(std::span<const double, 5> v, Bias bias, const WenoConfig& cfg) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ConfigError("weno interface: non-finite stencil value");
    }
    return reconstruct(v, bias, cfg);
}

Field derivative(std::span<const double> field, Bias bias, double dx, const WenoConfig& cfg,
                 Boundary boundary) {
    require_periodic(boundary, "weno derivative");
    if (field.size() < 5) throw ConfigError("weno derivative: need at least 5 cells");
    const Field face = interfaces(field, bias, cfg);
    const std::size_t n = field.size();
    Field d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left_face = face[i == 0 ? n - 1 : i - 1];
        d[i] = (face[i] - left_face) / dx;
    }
    return d;
}

Field flux_divergence(std::span<const double> u, std::span<const double> q, double dx,
                      const WenoConfig& cfg, Boundary boundary) {
    require_periodic(boundary, "weno flux divergence");
    const std::size_t n = q.size();
    if (u.size() != n) throw ConfigError("weno flux divergence: u and q sizes differ");
    if (n < 5) throw ConfigError("weno flux divergence: need at least 5 cells");

    double alpha = 0.0;
    for (double v : u) alpha = std::max(alpha, std::abs(v));

    Field f_plus(n);
    Field f_minus(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = u[i] * q[i];
        f_plus[i] = 0.5 * (f + alpha * q[i]);
        f_minus[i] = 0.5 * (f - alpha * q[i]);
    }
    const Field plus_face = interfaces(f_plus, Bias::Left, cfg);
    const Field minus_face = interfaces(f_minus, Bias::Right, cfg);

    Field d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t im = i == 0 ? n - 1 : i - 1;
        const double right_flux = plus_face[i] + minus_face[i];
        const double left_flux = plus_face[im] + minus_face[im];
        d[i] = (right_flux - left_flux) / dx;
    }
    return d;
}

WenoConfig config_for(Scheme scheme, double smoothness_eps) {
    return WenoConfig{scheme == Scheme::WenoLinear ? Mode::Linear : Mode::Nonlinear,
                      smoothness_eps};
}

}  // namespace icefloe::weno
