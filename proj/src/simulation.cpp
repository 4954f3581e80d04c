#include "icefloe/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace icefloe {

const char* to_string(Integrator i) {
    switch (i) {
        case Integrator::Tvrk3Explicit: return "tvrk3";
        case Integrator::BackwardEulerJfnk: return "jfnk";
        case Integrator::Evp: return "evp";
    }
    return "?";
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Completed: return "completed";
        case RunStatus::BlowUp: return "blowup";
        case RunStatus::NonConvergence: return "nonconvergence";
    }
    return "?";
}

void Extrema::update(const State& s) {
    const auto [amin, amax] = std::minmax_element(s.a.begin(), s.a.end());
    const auto [hmin, hmax] = std::minmax_element(s.h.begin(), s.h.end());
    if (!seeded) {
        min_a = *amin;
        max_a = *amax;
        min_h = *hmin;
        max_h = *hmax;
        seeded = true;
        return;
    }
    min_a = std::min(min_a, *amin);
    max_a = std::max(max_a, *amax);
    min_h = std::min(min_h, *hmin);
    max_h = std::max(max_h, *hmax);
}

void check_config(const State& initial, const SimulationConfig& cfg) {
    check_compatible(cfg.model);
    if (!(cfg.dt > 0.0)) throw ConfigError("time step must be positive");
    if (!(cfg.horizon >= 0.0)) throw ConfigError("horizon must be non-negative");
    if (cfg.integrator == Integrator::BackwardEulerJfnk && cfg.model.scheme != Scheme::CD) {
        throw ConfigError("the implicit momentum solve requires the cd scheme");
    }
    if (cfg.integrator == Integrator::Evp) evp::validate(cfg.evp);
    if (cfg.newton.lambda_schedule.empty()) throw ConfigError("empty Newton damping schedule");
    if (auto d = validate_state(initial, cfg.model.grid)) {
        throw ConfigError("invalid initial state: " + d->to_string());
    }
}

RunResult run_explicit(const State& initial, SimulationConfig cfg, RunObserver* observer) {
    cfg.integrator = Integrator::Tvrk3Explicit;
    return simulate(initial, cfg, observer);
}

namespace {

class Loop {
public:
    Loop(const SimulationConfig& cfg, RunObserver* obs) : cfg_(cfg), obs_(obs) {}

    RunResult run(const State& initial) {
        state_ = initial;
        potential_ = cfg_.potential;
        hooks_.mms_forcing = cfg_.mms_forcing;
        hooks_.potential = potential_ ? &*potential_ : nullptr;
        result_.extrema.update(state_);

        const auto n_steps = static_cast<std::size_t>(std::llround(cfg_.horizon / cfg_.dt));
        const std::size_t every =
            cfg_.snapshot_every > 0.0
                ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg_.snapshot_every / cfg_.dt)))
                : 0;
        if (cfg_.integrator == Integrator::Evp) sigma_ = evp::constitutive_stress(state_, cfg_.model);

        check_diffusion();
        emit_snapshot();

        for (std::size_t k = 1; k <= n_steps; ++k) {
            if (!advance(k)) break;
            if ((every != 0 && k % every == 0) || k == n_steps) {
                check_diffusion();
                emit_snapshot();
            }
        }
        if (result_.status != RunStatus::Completed && last_snapshot_step_ != result_.steps) {
            emit_snapshot();
        }

        result_.final_state = state_;
        result_.end_time = state_.time;
        result_.potential = potential_;
        result_.subcycle_tail.assign(tail_.begin(), tail_.end());
        return std::move(result_);
    }

private:
    bool advance(std::size_t k) {
        State next;
        try {
            switch (cfg_.integrator) {
                case Integrator::Tvrk3Explicit: {
                    const TendencyFn rhs = [&](const State& s) { return vp_rhs(s, cfg_.model, hooks_); };
                    next = tvrk3_step(state_, cfg_.dt, rhs);
                    break;
                }
                case Integrator::BackwardEulerJfnk: {
                    auto solved = jfnk::jfnk_solve(state_, cfg_.dt, cfg_.model, cfg_.newton);
                    result_.newton_iterations += solved.report.iterations;
                    result_.newton_max_iterations =
                        std::max(result_.newton_max_iterations, solved.report.iterations);
                    if (obs_) obs_->on_newton(k, state_.time + cfg_.dt, solved.report);
                    if (!solved.report.converged) {
                        result_.status = RunStatus::NonConvergence;
                        result_.message = "Newton did not converge in step " + std::to_string(k) +
                                          " (||F|| " + std::to_string(solved.report.final_norm) +
                                          " after " + std::to_string(solved.report.iterations) +
                                          " iterations)";
                        return false;
                    }
                    State moved = state_;
                    moved.u = solved.u;
                    const TendencyFn rhs = [&](const State& s) { return transport_rhs(s, cfg_.model, hooks_); };
                    next = tvrk3_step(moved, cfg_.dt, rhs);
                    next.u = std::move(solved.u);
                    break;
                }
                case Integrator::Evp: {
                    next = evp_advance();
                    break;
                }
            }
        } catch (const NonFiniteError& e) {
            record_blowup(e.what());
            return false;
        }
        next.time = static_cast<double>(k) * cfg_.dt;
        if (auto d = validate_state(next, cfg_.model.grid)) {
            record_blowup("non-finite state at t=" + std::to_string(next.time) + " s: " + d->to_string());
            return false;
        }
        state_ = std::move(next);
        result_.steps = k;
        result_.extrema.update(state_);
        watchdog();
        return true;
    }

    State evp_advance() {
        const double t0 = state_.time;
        const bool profiles = obs_ && obs_->wants_subcycle_profiles(t0);
        if (cfg_.subcycle_tail_steps > 0) {
            const std::size_t cap = cfg_.subcycle_tail_steps * cfg_.evp.n_sub;
            while (tail_.size() + cfg_.evp.n_sub > cap && !tail_.empty()) {
                for (std::size_t i = 0; i < cfg_.evp.n_sub && !tail_.empty(); ++i) tail_.pop_front();
            }
        }
        const evp::SubcycleFn on_sub = [&](std::size_t s, std::span<const double> u) {
            if (cfg_.subcycle_tail_steps > 0) {
                const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
                tail_.push_back({t0, s, *lo, *hi});
            }
            if (profiles) obs_->on_subcycle(t0, s, u);
        };
        return evp::evp_step(state_, sigma_, cfg_.dt, cfg_.evp, cfg_.model, hooks_, on_sub);
    }

    void watchdog() {
        if (!potential_) return;
        const Field du_dx = linear_strain_rate(state_.u, cfg_.model);
        for (const auto& e : potential::watchdog_step(state_, *potential_, du_dx, cfg_.dt)) {
            result_.activations.push_back(e);
            if (obs_) {
                obs_->on_activation(e);
                if (e.infeasible) obs_->on_warning(state_.time, "empty gamma interval: " + potential::describe(e));
            }
        }
    }

    void check_diffusion() {
        if (cfg_.integrator != Integrator::Tvrk3Explicit || result_.diffusion_warning) return;
        const double number = diffusion_number(state_, cfg_.model, cfg_.dt);
        if (number > 0.5) {
            result_.diffusion_warning = true;
            if (obs_) {
                obs_->on_warning(state_.time, "explicit diffusion number " + std::to_string(number) +
                                                  " exceeds 0.5");
            }
        }
    }

    void record_blowup(const std::string& why) {
        result_.status = RunStatus::BlowUp;
        result_.blowup_time = state_.time;
        result_.message = why;
    }

    void emit_snapshot() {
        last_snapshot_step_ = result_.steps;
        if (obs_) obs_->on_snapshot(state_);
        if (cfg_.keep_snapshots) result_.snapshots.push_back(state_);
    }

    const SimulationConfig& cfg_;
    RunObserver* obs_;
    State state_;
    std::optional<potential::PotentialConfig> potential_;
    RhsHooks hooks_;
    Field sigma_;
    std::deque<SubcycleExtrema> tail_;
    RunResult result_;
    std::size_t last_snapshot_step_ = 0;
};

}  // namespace

RunResult simulate(const State& initial, const SimulationConfig& cfg, RunObserver* observer) {
    check_config(initial, cfg);
    Loop loop(cfg, observer);
    return loop.run(initial);
}

}  // namespace icefloe
