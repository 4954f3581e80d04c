#include "icefloe/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "icefloe/mms.hpp"
#include "icefloe/model.hpp"

namespace icefloe::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Mms: return "mms";
        case Scenario::SharpVp: return "sharp_vp";
        case Scenario::SharpEvp: return "sharp_evp";
        case Scenario::PotentialDirichlet: return "potential_dirichlet";
        case Scenario::Custom: return "custom";
    }
    return "?";
}

const char* to_string(InitialKind k) {
    switch (k) {
        case InitialKind::Sharp: return "sharp";
        case InitialKind::Uniform: return "uniform";
        case InitialKind::Manufactured: return "mms";
    }
    return "?";
}

double default_snapshot_every(double horizon) { return horizon > 86400.0 ? 3600.0 : 60.0; }

RunSpec scenario_defaults(Scenario s) {
    RunSpec r;
    r.scenario = s;
    switch (s) {
        case Scenario::Mms:
            r.n_cells = 50;
            r.dx = kScenarioLength / 50.0;
            r.dt = 1e-4;
            r.horizon = 5.0;
            r.initial = InitialKind::Manufactured;
            r.snapshot_every = 0.0;
            break;
        case Scenario::SharpVp:
            r.scheme = Scheme::Weno;
            r.initial = InitialKind::Sharp;
            break;
        case Scenario::SharpEvp:
            r.scheme = Scheme::Weno;
            r.integrator = Integrator::Evp;
            r.dt = 10.0;
            r.evp.n_sub = 1000;
            r.initial = InitialKind::Sharp;
            break;
        case Scenario::PotentialDirichlet:
            r.integrator = Integrator::BackwardEulerJfnk;
            r.boundary = Boundary::DirichletZeroVelocity;
            r.n_cells = 100;
            r.dx = 2.0e4;
            r.dt = 90.0;
            r.horizon = 6.0 * 86400.0;
            r.potential_on = true;
            r.h0 = 1.0;
            r.a0 = 0.9;
            r.snapshot_every = 3600.0;
            break;
        case Scenario::Custom:
            break;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

double parse_number(const std::string& v, std::string* unit) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr == first) throw ParseError("expected a number, got '" + v + "'");
    const std::string rest = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (unit) {
        *unit = rest;
    } else if (!rest.empty()) {
        throw ParseError("unexpected trailing text '" + rest + "'");
    }
    if (!std::isfinite(out)) throw ParseError("value must be finite");
    return out;
}

double parse_plain(const std::string& v) { return parse_number(v, nullptr); }

double parse_length(const std::string& v) {
    std::string unit;
    const double x = parse_number(v, &unit);
    if (unit.empty() || unit == "m") return x;
    if (unit == "km") return x * 1.0e3;
    throw ParseError("unknown length unit '" + unit + "' (use m or km)");
}

double parse_time(const std::string& v) {
    std::string unit;
    const double x = parse_number(v, &unit);
    if (unit.empty() || unit == "s") return x;
    if (unit == "min") return x * 60.0;
    if (unit == "h") return x * 3600.0;
    if (unit == "d") return x * 86400.0;
    throw ParseError("unknown time unit '" + unit + "' (use s, min, h or d)");
}

std::size_t parse_count(const std::string& v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw ParseError("expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
    if (v == "off" || v == "false" || v == "no" || v == "0") return false;
    throw ParseError("expected on/off, got '" + v + "'");
}

template <class E>
E parse_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> names) {
    std::string options;
    for (const auto& [name, value] : names) {
        if (v == name) return value;
        options += options.empty() ? name : std::string(", ") + name;
    }
    throw ParseError("unknown value '" + v + "' (expected one of " + options + ")");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& v, F item) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(item(trim(tok)));
    if (out.empty()) throw ParseError("empty list");
    return out;
}

Scenario parse_scenario(const std::string& v) {
    return parse_enum<Scenario>(v, {{"mms", Scenario::Mms},
                                    {"sharp_vp", Scenario::SharpVp},
                                    {"sharp_evp", Scenario::SharpEvp},
                                    {"potential_dirichlet", Scenario::PotentialDirichlet},
                                    {"custom", Scenario::Custom}});
}

struct Line {
    std::string key;
    std::string value;
    std::string where;
};

struct Touched {
    bool cells = false;
    bool dx = false;
    bool snapshot = false;
    bool mms_cells = false;
};

using Setter = std::function<void(RunSpec&, const std::string&, Touched&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        const auto plain = [](double RunSpec::*m) {
            return [m](RunSpec& r, const std::string& v, Touched&) { r.*m = parse_plain(v); };
        };
        const auto param = [](double PhysParams::*m) {
            return [m](RunSpec& r, const std::string& v, Touched&) { r.params.*m = parse_plain(v); };
        };
        t["scheme"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.scheme = parse_enum<Scheme>(
                v, {{"cd", Scheme::CD}, {"weno", Scheme::Weno}, {"weno_linear", Scheme::WenoLinear}});
        };
        t["integrator"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.integrator = parse_enum<Integrator>(v, {{"tvrk3", Integrator::Tvrk3Explicit},
                                                      {"jfnk", Integrator::BackwardEulerJfnk},
                                                      {"evp", Integrator::Evp}});
        };
        t["boundary"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.boundary = parse_enum<Boundary>(
                v, {{"periodic", Boundary::Periodic}, {"dirichlet", Boundary::DirichletZeroVelocity}});
        };
        t["cells"] = [](RunSpec& r, const std::string& v, Touched& tc) {
            r.n_cells = parse_count(v);
            tc.cells = true;
        };
        t["dx"] = [](RunSpec& r, const std::string& v, Touched& tc) {
            r.dx = parse_length(v);
            tc.dx = true;
        };
        t["dt"] = [](RunSpec& r, const std::string& v, Touched&) { r.dt = parse_time(v); };
        t["horizon"] = [](RunSpec& r, const std::string& v, Touched&) { r.horizon = parse_time(v); };
        t["wind"] = plain(&RunSpec::wind);
        t["weno_eps"] = plain(&RunSpec::weno_eps);
        t["rho_ice"] = param(&PhysParams::rho_ice);
        t["rho_air"] = param(&PhysParams::rho_air);
        t["rho_water"] = param(&PhysParams::rho_water);
        t["c_da"] = param(&PhysParams::c_da);
        t["c_dw"] = param(&PhysParams::c_dw);
        t["p_star"] = param(&PhysParams::p_star);
        t["conc_c"] = param(&PhysParams::conc_c);
        t["ellipse_e"] = param(&PhysParams::ellipse_e);
        t["eps1"] = param(&PhysParams::eps1);
        t["eps2"] = param(&PhysParams::eps2);
        t["delta_min"] = param(&PhysParams::delta_min);
        t["n_sub"] = [](RunSpec& r, const std::string& v, Touched&) { r.evp.n_sub = parse_count(v); };
        t["damping_factor"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.evp.damping_factor = parse_plain(v);
        };
        t["newton_k_max"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.newton.k_max = static_cast<int>(parse_count(v));
        };
        t["newton_tol"] = [](RunSpec& r, const std::string& v, Touched&) { r.newton.gamma_nl = parse_plain(v); };
        t["newton_fd_eps"] = [](RunSpec& r, const std::string& v, Touched&) { r.newton.fd_eps = parse_plain(v); };
        t["newton_lambdas"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.newton.lambda_schedule = parse_list<double>(v, parse_plain);
        };
        t["potential"] = [](RunSpec& r, const std::string& v, Touched&) { r.potential_on = parse_bool(v); };
        t["gamma1"] = [](RunSpec& r, const std::string& v, Touched&) { r.potential.gamma1 = parse_plain(v); };
        t["gamma2"] = [](RunSpec& r, const std::string& v, Touched&) { r.potential.gamma2 = parse_plain(v); };
        t["gamma_h"] = [](RunSpec& r, const std::string& v, Touched&) { r.potential.gamma_h = parse_plain(v); };
        t["potential_form"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.potential.form = parse_enum<potential::Form>(
                v, {{"quadratic", potential::Form::Quadratic}, {"linear", potential::Form::Linear}});
        };
        t["initial"] = [](RunSpec& r, const std::string& v, Touched&) {
            r.initial = parse_enum<InitialKind>(v, {{"sharp", InitialKind::Sharp},
                                                    {"uniform", InitialKind::Uniform},
                                                    {"mms", InitialKind::Manufactured}});
        };
        t["h0"] = plain(&RunSpec::h0);
        t["a0"] = plain(&RunSpec::a0);
        t["u0"] = plain(&RunSpec::u0);
        t["snapshot_every"] = [](RunSpec& r, const std::string& v, Touched& tc) {
            r.snapshot_every = parse_time(v);
            tc.snapshot = true;
        };
        t["trace_steps"] = [](RunSpec& r, const std::string& v, Touched&) { r.trace_steps = parse_count(v); };
        t["mms_cells"] = [](RunSpec& r, const std::string& v, Touched& tc) {
            r.mms_cells = parse_list<std::size_t>(v, parse_count);
            tc.mms_cells = true;
        };
        t["out"] = [](RunSpec& r, const std::string& v, Touched&) { r.out_dir = v; };
        return t;
    }();
    return table;
}

Line split_line(const std::string& raw, const std::string& where) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, got '" + trim(raw) + "'");
    Line l{trim(std::string_view(raw).substr(0, eq)), trim(std::string_view(raw).substr(eq + 1)), where};
    if (l.key.empty()) throw ConfigError(where + ": missing key");
    if (l.value.empty()) throw ConfigError(where + ": missing value for '" + l.key + "'");
    return l;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

bool is_multiple(double length, double dx) {
    const double n = length / dx;
    return std::abs(n - std::round(n)) < 1e-9 * std::max(1.0, n);
}

}  // namespace

RunSpec load_config(const std::string& text, const std::vector<std::string>& overrides) {
    std::vector<Line> lines;
    {
        std::istringstream in(text);
        std::string raw;
        for (int no = 1; std::getline(in, raw); ++no) {
            if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            if (trim(raw).empty()) continue;
            lines.push_back(split_line(raw, "line " + std::to_string(no)));
        }
    }
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        lines.push_back(split_line(overrides[i], "override " + std::to_string(i + 1)));
    }

    Scenario scenario = Scenario::Custom;
    for (const auto& l : lines) {
        if (l.key != "scenario") continue;
        try {
            scenario = parse_scenario(l.value);
        } catch (const ParseError& e) {
            throw ConfigError(l.where + ": scenario: " + e.what());
        }
    }

    RunSpec spec = scenario_defaults(scenario);
    Touched touched;
    for (const auto& l : lines) {
        if (l.key == "scenario") continue;
        const auto it = setters().find(l.key);
        if (it == setters().end()) throw ConfigError(l.where + ": unknown key '" + l.key + "'");
        try {
            it->second(spec, l.value, touched);
        } catch (const ParseError& e) {
            throw ConfigError(l.where + ": " + l.key + ": " + e.what());
        }
    }

    // Built-in scenarios keep the 2000 km domain: one of cells/dx fixes the other.
    if (scenario != Scenario::Custom && touched.cells != touched.dx) {
        if (touched.cells) {
            require(spec.n_cells > 0, "cells must be positive");
            spec.dx = kScenarioLength / static_cast<double>(spec.n_cells);
        } else {
            require(spec.dx > 0.0 && is_multiple(kScenarioLength, spec.dx),
                    "dx must divide the 2000 km domain");
            spec.n_cells = static_cast<std::size_t>(std::llround(kScenarioLength / spec.dx));
        }
    }
    if (scenario == Scenario::Mms && (touched.cells || touched.dx) && !touched.mms_cells) {
        spec.mms_cells = {spec.n_cells};
    }
    if (!touched.snapshot && scenario != Scenario::Mms) spec.snapshot_every = default_snapshot_every(spec.horizon);

    validate(spec);
    return spec;
}

void validate(const RunSpec& s) {
    require(s.n_cells >= kMinCells, "cells must be at least " + std::to_string(kMinCells));
    require(s.dx > 0.0, "dx must be positive");
    require(s.dt > 0.0, "dt must be positive");
    require(s.horizon >= 0.0, "horizon must be non-negative");
    require(s.weno_eps > 0.0, "weno_eps must be positive");
    require(s.snapshot_every >= 0.0, "snapshot_every must be non-negative");
    require(s.params.rho_ice > 0.0 && s.params.p_star > 0.0 && s.params.ellipse_e > 0.0 &&
                s.params.delta_min > 0.0,
            "rho_ice, p_star, ellipse_e and delta_min must be positive");
    if (s.scheme != Scheme::CD) {
        require(s.boundary == Boundary::Periodic,
                std::string("scheme ") + to_string(s.scheme) + " supports periodic boundaries only");
    }
    if (s.integrator == Integrator::BackwardEulerJfnk) {
        require(s.scheme == Scheme::CD, "integrator jfnk requires scheme cd");
    }
    if (s.integrator == Integrator::Evp) evp::validate(s.evp);
    require(s.newton.k_max >= 1, "newton_k_max must be at least 1");
    require(s.newton.gamma_nl > 0.0 && s.newton.fd_eps > 0.0, "newton_tol and newton_fd_eps must be positive");
    require(!s.newton.lambda_schedule.empty(), "newton_lambdas must not be empty");
    for (double l : s.newton.lambda_schedule) require(l > 0.0 && l <= 1.0, "newton_lambdas must lie in (0, 1]");
    require(s.potential.gamma1 > 0.0 && s.potential.gamma2 > 0.0 && s.potential.gamma_h > 0.0,
            "gamma1, gamma2 and gamma_h must be positive");

    if (s.scenario == Scenario::Mms) {
        require(s.integrator == Integrator::Tvrk3Explicit, "scenario mms runs with integrator tvrk3");
        require(s.boundary == Boundary::Periodic, "scenario mms needs periodic boundaries");
        for (std::size_t n : s.mms_cells) require(n >= kMinCells, "mms_cells entries must be at least 8");
        return;
    }
    if (s.initial == InitialKind::Sharp) {
        const auto& ic = s.sharp;
        require(ic.strip_end <= s.length() + 1e-9 * s.length(), "the sharp initial condition needs a 2000 km domain");
        require(is_multiple(ic.strip_begin, s.dx) && is_multiple(ic.strip_end, s.dx),
                "dx must place cell interfaces at 400 km and 1600 km");
    }
    if (s.initial == InitialKind::Manufactured) {
        require(s.boundary == Boundary::Periodic, "initial=mms needs periodic boundaries");
        require(s.integrator == Integrator::Tvrk3Explicit, "initial=mms runs with integrator tvrk3");
        require(std::abs(s.length() - mms::kDomainLength) <= 1e-9 * mms::kDomainLength,
                "initial=mms needs a 2000 km domain");
    }
    check_config(initial_state(s), simulation_config(s));
}

SimulationConfig simulation_config(const RunSpec& s) {
    SimulationConfig c;
    c.model.grid = make_grid(s.n_cells, s.dx, layout_for(s.scheme), s.boundary);
    c.model.params = s.params;
    c.model.scheme = s.scheme;
    c.model.weno_eps = s.weno_eps;
    c.model.wind = s.wind;
    c.integrator = s.integrator;
    c.dt = s.dt;
    c.horizon = s.horizon;
    c.snapshot_every = s.snapshot_every;
    c.evp = s.evp;
    c.newton = s.newton;
    potential::PotentialConfig pc = s.potential;
    pc.apply_forcing = s.potential_on;
    c.potential = pc;
    if (s.initial == InitialKind::Manufactured) c.mms_forcing = mms::make_forcing(s.params, s.wind);
    return c;
}

State initial_state(const RunSpec& s) {
    const Grid g = make_grid(s.n_cells, s.dx, layout_for(s.scheme), s.boundary);
    if (s.initial == InitialKind::Manufactured) return mms::truth_state(g, 0.0);
    State st = make_state(g);
    if (s.initial == InitialKind::Sharp) {
        // Interfaces sit exactly at the strip edges, so no center is ambiguous.
        for (std::size_t j = 0; j < g.n_cells; ++j) {
            const double x = g.center_x(j);
            const bool thin = x > s.sharp.strip_begin && x < s.sharp.strip_end;
            st.h[j] = thin ? s.sharp.thin_h : s.sharp.thick_h;
            st.a[j] = thin ? s.sharp.thin_a : s.sharp.thick_a;
        }
        return st;
    }
    std::fill(st.u.begin(), st.u.end(), s.u0);
    std::fill(st.h.begin(), st.h.end(), s.h0);
    std::fill(st.a.begin(), st.a.end(), s.a0);
    ModelSetup setup;
    setup.grid = g;
    setup.scheme = s.scheme;
    apply_velocity_boundary(st.u, setup);
    return st;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json maybe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
    return f;
}

json spec_json(const RunSpec& s) {
    json j;
    j["scenario"] = to_string(s.scenario);
    j["scheme"] = to_string(s.scheme);
    j["integrator"] = to_string(s.integrator);
    j["boundary"] = to_string(s.boundary);
    j["cells"] = s.n_cells;
    j["dx_m"] = s.dx;
    j["dt_s"] = s.dt;
    j["horizon_s"] = s.horizon;
    j["wind_mps"] = s.wind;
    j["initial"] = to_string(s.initial);
    j["potential"] = s.potential_on ? "on" : "off";
    j["gamma"] = {s.potential.gamma1, s.potential.gamma2, s.potential.gamma_h};
    if (s.integrator == Integrator::Evp) j["n_sub"] = s.evp.n_sub;
    return j;
}

json activation_json(const potential::ActivationEvent& e) {
    json j;
    j["branch"] = potential::to_string(e.branch);
    j["time_s"] = e.time;
    j["gamma_lower"] = maybe(e.interval.lower);
    j["gamma_upper"] = maybe(e.interval.upper);
    j["gamma"] = e.gamma;
    j["forcing_applied"] = e.forcing_applied;
    j["infeasible"] = e.infeasible;
    j["gamma_outside"] = e.gamma_outside;
    return j;
}

struct StepTrace {
    double step_time = 0.0;
    std::vector<std::pair<std::size_t, Field>> profiles;
};

class DirectoryObserver : public RunObserver {
public:
    DirectoryObserver(const RunSpec& spec, const Grid& grid, const fs::path& dir)
        : spec_(spec), grid_(grid), dir_(dir), log_(open_out(dir / "run_log.jsonl")) {
        fs::create_directories(dir / "snapshots");
        for (const auto& e : fs::directory_iterator(dir / "snapshots")) {
            const std::string name = e.path().filename().string();
            if (name.rfind("snap_", 0) == 0 && e.path().extension() == ".csv") fs::remove(e.path());
        }
        index_ = open_out(dir / "snapshots" / "index.csv");
        index_ << "file,time_s\n";
        json start = {{"event", "start"}};
        start["spec"] = spec_json(spec);
        event(start);
    }

    void event(const json& j) { log_ << j.dump() << '\n'; }

    void on_snapshot(const State& state) override {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%06zu.csv", n_snapshots_++);
        write_snapshot(state, grid_, dir_ / "snapshots" / name);
        index_ << name << ',' << num(state.time) << '\n';
    }

    void on_newton(std::size_t step, double time, const jfnk::NewtonReport& rep) override {
        json j = {{"event", "newton"}, {"step", step}, {"time_s", time}, {"converged", rep.converged},
                  {"iterations", rep.iterations}};
        json norms = json::array();
        for (double r : rep.residual_norms) norms.push_back(maybe(r));
        j["residual_norms"] = norms;
        j["lambdas"] = rep.lambdas;
        event(j);
    }

    void on_activation(const potential::ActivationEvent& e) override {
        json j = {{"event", "activation"}};
        j.update(activation_json(e));
        event(j);
        if (e.gamma_outside && !e.infeasible) {
            on_warning(e.time, std::string("configured gamma for ") + potential::to_string(e.branch) +
                                   " lies outside the estimated interval");
        }
    }

    void on_warning(double time, const std::string& message) override {
        event({{"event", "warning"}, {"time_s", time}, {"message", message}});
    }

    bool wants_subcycle_profiles(double step_time) override {
        if (spec_.trace_steps == 0) return false;
        while (traces_.size() >= spec_.trace_steps) traces_.pop_front();
        traces_.push_back({step_time, {}});
        return true;
    }

    void on_subcycle(double, std::size_t subcycle, std::span<const double> u) override {
        traces_.back().profiles.emplace_back(subcycle, Field(u.begin(), u.end()));
    }

    void write_traces() {
        std::ofstream f = open_out(dir_ / "subcycle_trace.csv");
        f << "step_time_s,subcycle,x_m,u_mps\n";
        for (const auto& step : traces_) {
            for (const auto& [s, u] : step.profiles) {
                for (std::size_t i = 0; i < u.size(); ++i) {
                    f << num(step.step_time) << ',' << s << ',' << num(grid_.u_x(i)) << ',' << num(u[i]) << '\n';
                }
            }
        }
    }

    [[nodiscard]] std::size_t snapshots() const { return n_snapshots_; }

private:
    const RunSpec& spec_;
    Grid grid_;
    fs::path dir_;
    std::ofstream log_;
    std::ofstream index_;
    std::size_t n_snapshots_ = 0;
    std::deque<StepTrace> traces_;
};

void write_json(const fs::path& p, const json& j) {
    std::ofstream f = open_out(p);
    f << j.dump(2) << '\n';
}

void write_error_summary(const RunSpec& spec, const fs::path& dir, const std::string& what) {
    json s;
    s["spec"] = spec_json(spec);
    s["status"] = "error";
    s["message"] = what;
    write_json(dir / "summary.json", s);
}

}  // namespace

int exit_code(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return 0;
        case RunStatus::BlowUp: return 2;
        case RunStatus::NonConvergence: return 3;
    }
    return 1;
}

RunReport run(const RunSpec& spec) {
    if (spec.scenario == Scenario::Mms) return run_convergence(spec);
    validate(spec);
    const fs::path dir = spec.out_dir;
    fs::create_directories(dir);

    const SimulationConfig cfg = simulation_config(spec);
    RunReport report;
    report.summary_path = dir / "summary.json";
    try {
        DirectoryObserver obs(spec, cfg.model.grid, dir);
        report.result = simulate(initial_state(spec), cfg, &obs);
        const RunResult& r = report.result;

        if (r.status == RunStatus::BlowUp) {
            obs.event({{"event", "blowup"}, {"last_finite_time_s", maybe(r.blowup_time.value_or(NAN))},
                       {"message", r.message}});
        } else if (r.status == RunStatus::NonConvergence) {
            obs.event({{"event", "nonconvergence"}, {"time_s", r.end_time}, {"message", r.message}});
        }
        obs.event({{"event", "end"}, {"status", to_string(r.status)}, {"time_s", r.end_time}});

        json files = {"run_log.jsonl", "snapshots/index.csv"};
        if (spec.integrator == Integrator::Evp) {
            std::ofstream tail = open_out(dir / "subcycle_tail.csv");
            tail << "step_time_s,subcycle,u_min,u_max\n";
            for (const auto& e : r.subcycle_tail) {
                tail << num(e.step_time) << ',' << e.subcycle << ',' << num(e.u_min) << ',' << num(e.u_max) << '\n';
            }
            files.push_back("subcycle_tail.csv");
            if (spec.trace_steps > 0) {
                obs.write_traces();
                files.push_back("subcycle_trace.csv");
            }
        }

        json s;
        s["spec"] = spec_json(spec);
        s["status"] = to_string(r.status);
        s["message"] = r.message;
        s["end_time_s"] = r.end_time;
        s["blowup_time_s"] = r.blowup_time ? json(*r.blowup_time) : json(nullptr);
        s["steps"] = r.steps;
        s["min_A"] = r.extrema.min_a;
        s["max_A"] = r.extrema.max_a;
        s["min_h"] = r.extrema.min_h;
        s["max_h"] = r.extrema.max_h;
        s["diffusion_warning"] = r.diffusion_warning;
        if (spec.integrator == Integrator::BackwardEulerJfnk) {
            s["newton_total_iterations"] = r.newton_iterations;
            s["newton_max_iterations"] = r.newton_max_iterations;
        }
        json acts = json::array();
        for (const auto& e : r.activations) acts.push_back(activation_json(e));
        s["activations"] = acts;
        s["snapshots"] = obs.snapshots();
        s["files"] = files;
        write_json(report.summary_path, s);

        report.status = r.status;
        report.exit_code = exit_code(r.status);
        report.message = r.message;
    } catch (const std::exception& e) {
        write_error_summary(spec, dir, e.what());
        throw;
    }
    return report;
}

RunReport run_convergence(const RunSpec& spec) {
    validate(spec);
    const fs::path dir = spec.out_dir;
    fs::create_directories(dir);
    RunReport report;
    report.summary_path = dir / "summary.json";

    mms::MmsOptions opts;
    opts.dt = spec.dt;
    opts.horizon = spec.horizon;
    opts.wind = spec.wind;
    opts.weno_eps = spec.weno_eps;
    opts.params = spec.params;

    try {
        std::vector<std::future<mms::MmsErrors>> jobs;
        for (std::size_t n : spec.mms_cells) {
            jobs.push_back(std::async(std::launch::async, [&, n] { return mms::run_mms(spec.scheme, n, opts); }));
        }
        std::vector<mms::MmsErrors> runs;
        for (auto& j : jobs) runs.push_back(j.get());

        std::ofstream log = open_out(dir / "run_log.jsonl");
        json start = {{"event", "start"}};
        start["spec"] = spec_json(spec);
        log << start.dump() << '\n';
        bool all_done = true;
        json res = json::array();
        for (const auto& r : runs) {
            all_done = all_done && r.completed;
            json j = {{"cells", r.n_cells}, {"dx_m", r.dx}, {"completed", r.completed},
                      {"err_u", maybe(r.err_u)}, {"err_h", maybe(r.err_h)}, {"err_a", maybe(r.err_a)}};
            if (!r.completed) {
                j["message"] = r.message;
                log << json{{"event", "blowup"}, {"cells", r.n_cells}, {"message", r.message}}.dump() << '\n';
            }
            json line = {{"event", "resolution"}};
            line.update(j);
            log << line.dump() << '\n';
            res.push_back(j);
        }

        json s;
        s["spec"] = spec_json(spec);
        s["status"] = all_done ? "completed" : "blowup";
        s["resolutions"] = res;
        if (all_done) {
            const auto rows = mms::convergence_table(runs);
            std::ofstream csv = open_out(dir / "convergence.csv");
            csv << mms::convergence_csv(rows);
            json rates = json::array();
            for (const auto& row : rows) {
                if (row.rate_u) rates.push_back({{"u", *row.rate_u}, {"h", *row.rate_h}, {"A", *row.rate_a}});
            }
            s["rates"] = rates;
            s["files"] = {"convergence.csv", "run_log.jsonl"};
        }
        write_json(report.summary_path, s);
        report.status = all_done ? RunStatus::Completed : RunStatus::BlowUp;
        report.exit_code = exit_code(report.status);
        if (!all_done) report.message = "a manufactured-solution resolution did not complete";
    } catch (const std::exception& e) {
        write_error_summary(spec, dir, e.what());
        throw;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Snapshots

Snapshot to_snapshot(const State& state, const Grid& grid) {
    Snapshot s;
    const std::size_t n = grid.n_cells;
    s.x.resize(n);
    s.u.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        s.x[j] = grid.center_x(j);
        s.u[j] = grid.layout == Layout::StaggeredCGrid ? 0.5 * (state.u[j] + state.u[j + 1]) : state.u[j];
    }
    s.h = state.h;
    s.a = state.a;
    return s;
}

void write_snapshot(const State& state, const Grid& grid, const fs::path& path) {
    if (state.u.size() != grid.u_slots() || state.h.size() != grid.n_cells || state.a.size() != grid.n_cells) {
        throw ConfigError("write_snapshot: field lengths do not match the grid");
    }
    const Snapshot s = to_snapshot(state, grid);
    std::ofstream f = open_out(path);
    f << "x_m,u_mps,h_m,A\n";
    for (std::size_t j = 0; j < s.x.size(); ++j) {
        f << num(s.x[j]) << ',' << num(s.u[j]) << ',' << num(s.h[j]) << ',' << num(s.a[j]) << '\n';
    }
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

Snapshot read_snapshot(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line) || trim(line) != "x_m,u_mps,h_m,A") {
        throw std::runtime_error(path.string() + ": unexpected snapshot header");
    }
    Snapshot s;
    for (int no = 2; std::getline(f, line); ++no) {
        if (trim(line).empty()) continue;
        double v[4];
        const char* p = line.c_str();
        for (int k = 0; k < 4; ++k) {
            char* end = nullptr;
            v[k] = std::strtod(p, &end);
            if (end == p || (k < 3 && *end != ',')) {
                throw std::runtime_error(path.string() + ": malformed row " + std::to_string(no));
            }
            p = end + 1;
        }
        s.x.push_back(v[0]);
        s.u.push_back(v[1]);
        s.h.push_back(v[2]);
        s.a.push_back(v[3]);
    }
    return s;
}

}  // namespace icefloe::cli
