#include "icefloe/core.hpp"

#include <algorithm>
#include <cmath>

namespace icefloe {

Grid make_grid(std::size_t n_cells, double dx, Layout layout, Boundary boundary) {
    if (n_cells < kMinCells) {
        throw ConfigError("grid needs at least " + std::to_string(kMinCells) + " cells, got " +
                          std::to_string(n_cells));
    }
    if (!(dx > 0.0) || !std::isfinite(dx)) {
        throw ConfigError("grid spacing must be positive and finite");
    }
    return Grid{n_cells, dx, static_cast<double>(n_cells) * dx, layout, boundary};
}

Layout layout_for(Scheme scheme) {
    return scheme == Scheme::CD ? Layout::StaggeredCGrid : Layout::Collocated;
}

State make_state(const Grid& grid) {
    State s;
    s.u.assign(grid.u_slots(), 0.0);
    s.h.assign(grid.center_slots(), 0.0);
    s.a.assign(grid.center_slots(), 0.0);
    return s;
}

std::string StateDiagnostic::to_string() const {
    return field + "[" + std::to_string(index) + "]: " + reason;
}

namespace {

std::optional<StateDiagnostic> check_size(const char* name, const Field& f, std::size_t expected) {
    if (f.size() == expected) return std::nullopt;
    return StateDiagnostic{name, std::min(f.size(), expected),
                           "size mismatch (have " + std::to_string(f.size()) + ", expected " +
                               std::to_string(expected) + ")"};
}

std::optional<StateDiagnostic> check_values(const char* name, const Field& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i])) return StateDiagnostic{name, i, "non-finite value"};
    }
    return std::nullopt;
}

}  // namespace

std::optional<StateDiagnostic> validate_state(const State& state, const Grid& grid) {
    if (auto d = check_size("u", state.u, grid.u_slots())) return d;
    if (auto d = check_size("h", state.h, grid.center_slots())) return d;
    if (auto d = check_size("A", state.a, grid.center_slots())) return d;
    if (auto d = check_values("u", state.u)) return d;
    if (auto d = check_values("h", state.h)) return d;
    if (auto d = check_values("A", state.a)) return d;
    return std::nullopt;
}

const char* to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::CD: return "cd";
        case Scheme::Weno: return "weno";
        case Scheme::WenoLinear: return "weno_linear";
    }
    return "?";
}

const char* to_string(Boundary boundary) {
    return boundary == Boundary::Periodic ? "periodic" : "dirichlet";
}

}  // namespace icefloe
