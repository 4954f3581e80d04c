#include "icefloe/potential.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace icefloe::potential {

const char* to_string(Branch b) {
    switch (b) {
        case Branch::ALow: return "A<0";
        case Branch::AHigh: return "A>1";
        case Branch::HLow: return "h<0";
    }
    return "?";
}

const BranchState& PotentialConfig::branch(Branch b) const {
    switch (b) {
        case Branch::ALow: return a_low;
        case Branch::AHigh: return a_high;
        case Branch::HLow: return h_low;
    }
    return a_low;
}

BranchState& PotentialConfig::branch(Branch b) {
    return const_cast<BranchState&>(std::as_const(*this).branch(b));
}

double potential_force(double q, double lo, std::optional<double> hi, double g_lo, double g_hi,
                       Form form) {
    if (q < lo) {
        return form == Form::Quadratic ? -2.0 * g_lo * (q - lo) : g_lo;
    }
    if (hi && q > *hi) {
        return form == Form::Quadratic ? -2.0 * g_hi * (q - *hi) : -g_hi;
    }
    return 0.0;
}

void add_forcing(const PotentialConfig& cfg, std::span<const double> h, std::span<const double> a,
                 std::span<double> dh, std::span<double> da) {
    if (!cfg.apply_forcing) return;
    if (cfg.h_low.active) {
        for (std::size_t j = 0; j < h.size(); ++j) {
            if (h[j] < 0.0) dh[j] += potential_force(h[j], 0.0, std::nullopt, cfg.gamma_h, 0.0, cfg.form);
        }
    }
    if (cfg.a_low.active || cfg.a_high.active) {
        const double g_lo = cfg.a_low.active ? cfg.gamma1 : 0.0;
        const double g_hi = cfg.a_high.active ? cfg.gamma2 : 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] < 0.0 || a[j] > 1.0) da[j] += potential_force(a[j], 0.0, 1.0, g_lo, g_hi, cfg.form);
        }
    }
}

std::optional<GammaInterval> estimate_lower_branch_range(std::span<const double> q,
                                                         std::span<const double> du_dx, double dt) {
    if (q.size() != du_dx.size()) throw ConfigError("gamma estimate: field sizes differ");
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool violated = false;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double a = du_dx[j];
        lower = std::max(lower, -0.5 * a);
        const double b0 = q[j];
        if (b0 < 0.0) {
            violated = true;
            upper = std::min(upper, -0.5 * a - (1.0 - b0) / (2.0 * b0 * dt));
        }
    }
    if (!violated) return std::nullopt;
    return GammaInterval{lower, upper};
}

std::optional<GammaInterval> estimate_gamma1_range(std::span<const double> a,
                                                   std::span<const double> du_dx, double dt) {
    return estimate_lower_branch_range(a, du_dx, dt);
}

std::optional<GammaInterval> estimate_gamma_h_range(std::span<const double> h,
                                                    std::span<const double> du_dx, double dt) {
    return estimate_lower_branch_range(h, du_dx, dt);
}

std::optional<GammaInterval> estimate_gamma2_range(std::span<const double> a,
                                                   std::span<const double> du_dx, double dt) {
    if (a.size() != du_dx.size()) throw ConfigError("gamma estimate: field sizes differ");
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool violated = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double b0 = a[j];
        if (b0 > 1.0) {
            violated = true;
            const double base = -du_dx[j] * b0 / (2.0 * (b0 - 1.0));
            lower = std::max(lower, base);
            upper = std::min(upper, base + b0 / (2.0 * (b0 - 1.0) * dt));
        }
    }
    if (!violated) return std::nullopt;
    return GammaInterval{lower, upper};
}

namespace {

void try_activate(Branch b, std::optional<GammaInterval> interval, double gamma, double time,
                  PotentialConfig& cfg, std::vector<ActivationEvent>& events) {
    BranchState& st = cfg.branch(b);
    if (st.active || !interval) return;
    st.active = true;
    st.activation_time = time;
    st.interval = interval;
    ActivationEvent e;
    e.branch = b;
    e.time = time;
    e.interval = *interval;
    e.gamma = gamma;
    e.forcing_applied = cfg.apply_forcing;
    e.infeasible = !interval->feasible();
    e.gamma_outside = !interval->contains(gamma);
    events.push_back(e);
}

}  // namespace

std::vector<ActivationEvent> watchdog_step(const State& state, PotentialConfig& cfg,
                                           std::span<const double> du_dx, double dt) {
    std::vector<ActivationEvent> events;
    if (!cfg.a_low.active) {
        try_activate(Branch::ALow, estimate_gamma1_range(state.a, du_dx, dt), cfg.gamma1, state.time,
                     cfg, events);
    }
    if (!cfg.a_high.active) {
        try_activate(Branch::AHigh, estimate_gamma2_range(state.a, du_dx, dt), cfg.gamma2,
                     state.time, cfg, events);
    }
    if (!cfg.h_low.active) {
        try_activate(Branch::HLow, estimate_gamma_h_range(state.h, du_dx, dt), cfg.gamma_h,
                     state.time, cfg, events);
    }
    return events;
}

std::string describe(const ActivationEvent& e) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "t=%.1f s branch %s interval (%.6g, %.6g] gamma=%.3g%s%s%s",
                  e.time, to_string(e.branch), e.interval.lower, e.interval.upper, e.gamma,
                  e.forcing_applied ? "" : " (monitor only)",
                  e.infeasible ? " INFEASIBLE interval" : "",
                  e.gamma_outside ? " gamma outside interval" : "");
    return buf;
}

}  // namespace icefloe::potential
