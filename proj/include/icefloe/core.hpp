/// @file core.hpp
/// @brief Domain types shared by every solver: physical constants, grids, state.
///
/// All quantities are SI. Fields are plain 64-bit vectors; their length is
/// fixed by the grid layout:
///
///   Collocated      u, h, A all at the n_cells cell midpoints
///   StaggeredCGrid  u at the n_cells+1 vertices, h, A (and every rheology
///                   quantity) at the n_cells centers
///
/// On a periodic staggered grid vertex n_cells is the same point as vertex 0;
/// solvers keep the two slots equal.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace icefloe {

using Field = std::vector<double>;

/// Raised for misuse of an API: wrong layout, mismatched sizes, bad config.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PhysParams {
    double rho_ice = 900.0;     // kg/m^3
    double rho_air = 1.3;       // kg/m^3
    double rho_water = 1026.0;  // kg/m^3
    double c_da = 1.2e-3;
    double c_dw = 5.5e-3;
    double p_star = 27.5e3;     // N/m^2
    double conc_c = 20.0;
    double ellipse_e = 2.0;
    double eps1 = 1e-10;        // m^2/s^2, water drag regularizer
    double eps2 = 1e-22;        // s^-2, strain regularizer
    double delta_min = 2e-9;    // s^-1

    /// 1 + e^-2, the factor relating bulk+shear viscosity to bulk viscosity.
    [[nodiscard]] double ellipse_factor() const { return 1.0 + 1.0 / (ellipse_e * ellipse_e); }

    bool operator==(const PhysParams&) const = default;
};

enum class Layout { Collocated, StaggeredCGrid };
enum class Boundary { Periodic, DirichletZeroVelocity };
enum class Scheme { CD, Weno, WenoLinear };

struct Grid {
    std::size_t n_cells = 0;
    double dx = 0.0;
    double length = 0.0;
    Layout layout = Layout::Collocated;
    Boundary boundary = Boundary::Periodic;

    [[nodiscard]] std::size_t center_slots() const { return n_cells; }
    [[nodiscard]] std::size_t u_slots() const {
        return layout == Layout::StaggeredCGrid ? n_cells + 1 : n_cells;
    }
    /// Midpoint of cell j, (j + 1/2) dx.
    [[nodiscard]] double center_x(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dx; }
    /// Location of velocity slot i (vertex i dx on the C-grid, midpoint otherwise).
    [[nodiscard]] double u_x(std::size_t i) const {
        return layout == Layout::StaggeredCGrid ? static_cast<double>(i) * dx : center_x(i);
    }
    [[nodiscard]] bool periodic() const { return boundary == Boundary::Periodic; }
};

/// Smallest grid the WENO stencil plus periodic halo supports.
inline constexpr std::size_t kMinCells = 8;

Grid make_grid(std::size_t n_cells, double dx, Layout layout, Boundary boundary);

/// Layout a scheme runs on: CD on the C-grid, WENO variants collocated.
Layout layout_for(Scheme scheme);

struct State {
    double time = 0.0;
    Field u;
    Field h;
    Field a;
};

/// Zero-initialised state with field lengths matching the grid.
State make_state(const Grid& grid);

struct StateDiagnostic {
    std::string field;
    std::size_t index = 0;
    std::string reason;

    [[nodiscard]] std::string to_string() const;
};

/// nullopt when every field is finite and sized for the grid; otherwise the
/// first offending field/index (size problems are reported before values).
std::optional<StateDiagnostic> validate_state(const State& state, const Grid& grid);

/// Per-cell rheology quantities, all at cell centers.
struct RheologyFields {
    Field delta;
    Field zeta;
    Field eta;
    Field pressure;
    Field sigma;
};

const char* to_string(Scheme scheme);
const char* to_string(Boundary boundary);

}  // namespace icefloe
