#include <algorithm>
#include <cmath>

#include "engine.hpp"

namespace ssg {
namespace detail {

SolverStatus run_vi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L, double naive_eps) {
    std::vector<double> scratch;
    while (!states.empty()) {
        if (auto stop = ctx.limit(states.size())) return *stop;
        const double change = sweep(model, states, L, ctx.cfg.gauss_seidel, ctx.cfg.mode, scratch);
        ctx.count_sweep(states.size());
        ctx.observe(L, nullptr);
        if (change <= naive_eps) break;
    }
    return SolverStatus::Converged;
}

SolverStatus run_bvi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L,
                     ValueFunction& U, std::uint64_t stall_window) {
    const auto& cfg = ctx.cfg;
    std::vector<double> scratch;
    std::uint64_t local = 0;
    std::uint64_t unchanged = 0;
    double last_width = -1.0;
    for (;;) {
        const double width = max_width(states, L, U, cfg.mode);
        if (width <= cfg.epsilon) return SolverStatus::Converged;
        if (stall_window != 0) {
            unchanged = width == last_width ? unchanged + 1 : 0;
            if (unchanged >= stall_window) return SolverStatus::Stalled;
        }
        last_width = width;
        if (auto stop = ctx.limit(2 * states.size())) return *stop;

        sweep(model, states, L, cfg.gauss_seidel, cfg.mode, scratch);
        sweep(model, states, U, cfg.gauss_seidel, cfg.mode, scratch);
        ++local;
        ++ctx.iterations;
        ctx.updates += 2 * states.size();
        if (cfg.deflate && local % cfg.deflate_every == 0)
            deflate(model, region_candidates(model, states, L), U);
        ctx.observe(L, &U);
    }
}

SolverStatus run_ovi(RunContext& ctx, const SsgModel& model, Region states, ValueFunction& L,
                     ValueFunction& U) {
    const auto& cfg = ctx.cfg;
    double naive = cfg.effective_naive_epsilon();
    ValueFunction next = U;
    ValueFunction probe;
    std::vector<double> scratch;

    auto give_up = [&](SolverStatus status) {
        // An unverified guess is no bound; fall back to the trivial one.
        for (StateId s : states) U[s] = 1.0;
        return status;
    };

    for (;;) {
        const SolverStatus vi = run_vi(ctx, model, states, L, naive);
        if (vi != SolverStatus::Converged) return give_up(vi);

        ++ctx.phases;
        for (StateId s : states) U[s] = diff_plus(L[s], cfg.epsilon, cfg.mode);
        const auto candidates = cfg.deflate ? region_candidates(model, states, L) : std::vector<EcCandidate>{};
        for (StateId s : states) next[s] = U[s];
        // The probe keeps iterating from below; candidates stay tied to L.
        if (cfg.ovi_crossing_check) probe = L;

        const auto phase_length = static_cast<std::uint64_t>(std::ceil(1.0 / naive));
        for (std::uint64_t i = 0; i < phase_length; ++i) {
            const std::size_t width = cfg.ovi_crossing_check ? 2 * states.size() : states.size();
            if (auto stop = ctx.limit(width)) return give_up(*stop);
            sweep(model, states, next, cfg.gauss_seidel, cfg.mode, scratch);
            deflate(model, candidates, next);
            ctx.count_sweep(states.size());

            bool below = true;
            bool above = true;
            for (StateId s : states) {
                below = below && next[s] <= U[s];
                above = above && next[s] >= U[s];
            }
            if (below) {
                for (StateId s : states) U[s] = std::max(U[s], L[s]);
                ctx.observe(L, &U);
                return SolverStatus::Converged;
            }
            // The guess did not drop anywhere; L is kept as is.
            if (cfg.ovi_lower_check && above) break;
            for (StateId s : states) {
                U[s] = std::min(U[s], next[s]);
                next[s] = U[s];
            }
            if (cfg.ovi_crossing_check) {
                sweep(model, states, probe, cfg.gauss_seidel, cfg.mode, scratch);
                ctx.updates += states.size();
                const bool crossed =
                    std::any_of(states.begin(), states.end(), [&](StateId s) { return probe[s] > U[s]; });
                if (crossed) break;
            }
            ctx.observe(L, nullptr);
        }
        if (cfg.ovi_crossing_check)
            for (StateId s : states) L[s] = std::max(L[s], probe[s]);
        naive /= 2.0;
    }
}

}  // namespace detail

namespace {

SolverResult finish_bounds(const detail::RunContext& ctx, SolverStatus status, ValueFunction L, ValueFunction U) {
    SolverResult r;
    r.lower = std::move(L);
    r.upper = std::move(U);
    r.status = status;
    ctx.finish(r);
    return r;
}

}  // namespace

SolverResult solve_vi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg) {
    detail::RunContext ctx(cfg);
    ValueFunction L = initial_lower(model, classes);
    const auto status = detail::run_vi(ctx, model, classes.unknown, L, cfg.effective_naive_epsilon());
    return finish_bounds(ctx, status, L, L);
}

SolverResult solve_bvi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg) {
    detail::RunContext ctx(cfg);
    ValueFunction L = initial_lower(model, classes);
    ValueFunction U = initial_upper(model, classes);
    const auto status = detail::run_bvi(ctx, model, classes.unknown, L, U, 0);
    return finish_bounds(ctx, status, std::move(L), std::move(U));
}

SolverResult solve_ovi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg) {
    detail::RunContext ctx(cfg);
    ValueFunction L = initial_lower(model, classes);
    ValueFunction U = initial_upper(model, classes);
    const auto status = detail::run_ovi(ctx, model, classes.unknown, L, U);
    return finish_bounds(ctx, status, std::move(L), std::move(U));
}

}  // namespace ssg
