#pragma once

// Internal building blocks shared by the solvers. Every routine works on a
// region: a sorted subset of states whose values are iterated, while all
// other entries of the value vectors are read as fixed constants.

#include <chrono>
#include <optional>
#include <span>
#include <vector>

#include "ssg/solvers.hpp"

namespace ssg::detail {

using Clock = std::chrono::steady_clock;
using Region = std::span<const StateId>;

class RunContext {
public:
    explicit RunContext(const SolverConfig& config);

    const SolverConfig& cfg;
    Clock::time_point start;
    std::uint64_t iterations = 0;
    std::uint64_t updates = 0;
    std::uint64_t phases = 0;

    bool timed_out() const;
    /// Status to stop with before running one more sweep over `width` states.
    std::optional<SolverStatus> limit(std::size_t width) const;
    void count_sweep(std::size_t width) {
        ++iterations;
        updates += width;
    }
    void observe(const ValueFunction& L, const ValueFunction* U) const {
        if (cfg.observer) cfg.observer(L, U);
    }
    void finish(SolverResult& result) const;
};

/// One Bellman sweep over the region; returns the largest |diff| between
/// old and new values.
double sweep(const SsgModel& model, Region states, ValueFunction& f, bool gauss_seidel, DiffMode mode,
             std::vector<double>& scratch);

double max_width(Region states, const ValueFunction& L, const ValueFunction& U, DiffMode mode);

/// SEC candidates restricted to the region.
std::vector<EcCandidate> region_candidates(const SsgModel& model, Region states, const ValueFunction& L);

SolverStatus run_vi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L, double naive_eps);

/// stall_window 0 disables stall detection.
SolverStatus run_bvi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L,
                     ValueFunction& U, std::uint64_t stall_window);

SolverStatus run_ovi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L,
                     ValueFunction& U);

/// Region with exits folded into a goal mass. Targets outside the region
/// contribute prob * value(target) to goal_mass.
struct LocalAction {
    std::vector<std::pair<std::uint32_t, double>> inner;
    double goal_mass = 0.0;
};

struct LocalGame {
    std::vector<StateId> states;
    std::vector<std::vector<LocalAction>> actions;

    std::size_t size() const { return states.size(); }
    double action_value(std::uint32_t s, ActionIndex a, const std::vector<double>& x) const {
        const auto& act = actions[s][a];
        double v = act.goal_mass;
        for (const auto& [t, p] : act.inner) v += p * x[t];
        return v;
    }
};

/// outside supplies the fixed values of states not in the region.
LocalGame build_local_game(const SsgModel& model, Region states, const ValueFunction& outside);

/// Exact value of the chain with row s given by goal_mass[s] and rows[s].
std::vector<double> solve_absorbing(const std::vector<std::vector<std::pair<std::uint32_t, double>>>& rows,
                                    const std::vector<double>& goal_mass);

/// Value of the region when every state plays the uniform mixture of
/// choices[s] (a single entry for deterministic choices).
std::vector<double> evaluate(const LocalGame& game, const std::vector<std::vector<ActionIndex>>& choices);

/// Strategy iteration on the region. tau (local indices) is used as the warm
/// start for the first best response when valid. Returns the exact local
/// values through values.
SolverStatus run_si(RunContext& ctx, const SsgModel& model, const LocalGame& game,
                    std::vector<ActionIndex> tau, std::vector<double>& values, std::uint64_t& rounds);

}  // namespace ssg::detail
