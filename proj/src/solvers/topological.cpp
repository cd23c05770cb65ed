#include <sstream>
#include <stdexcept>

#include "engine.hpp"

namespace ssg {

namespace {

constexpr std::uint64_t kDefaultStallWindow = 1000;

std::string describe_scc(std::size_t index, const std::vector<StateId>& states) {
    std::ostringstream out;
    out << "SCC " << index << " (" << states.size() << " state" << (states.size() == 1 ? "" : "s")
        << ", first state " << states.front() << ")";
    return out.str();
}

}  // namespace

SolverResult solve_topological(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg,
                               Algorithm inner) {
    if (inner != Algorithm::VI && inner != Algorithm::BVI && inner != Algorithm::OVI)
        throw std::invalid_argument("topological inner solver must be vi, bvi or ovi");
    detail::RunContext ctx(cfg);
    const std::uint64_t window = cfg.stall_window != 0 ? cfg.stall_window : kDefaultStallWindow;
    ValueFunction L = initial_lower(model, classes);
    ValueFunction U = initial_upper(model, classes);
    const auto scc = scc_decomposition(model);

    SolverResult result;
    result.status = SolverStatus::Converged;
    for (std::size_t c = scc.components.size(); c-- > 0;) {
        const auto& comp = scc.components[c];
        if (!classes.is_unknown(comp.front())) continue;
        SolverStatus status;
        switch (inner) {
            case Algorithm::VI:
                status = detail::run_vi(ctx, model, comp, L, cfg.effective_naive_epsilon());
                for (StateId s : comp) U[s] = L[s];
                break;
            case Algorithm::OVI:
                status = detail::run_ovi(ctx, model, comp, L, U);
                break;
            default:
                status = detail::run_bvi(ctx, model, comp, L, U, window);
                break;
        }
        if (status != SolverStatus::Converged) {
            result.status = status;
            result.diagnostics = to_string(status) + " in " + describe_scc(c, comp);
            break;
        }
    }
    result.lower = std::move(L);
    result.upper = std::move(U);
    ctx.finish(result);
    return result;
}

SolverResult solve_ptvi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg,
                        InnerSolver inner) {
    detail::RunContext ctx(cfg);
    ValueFunction L = initial_lower(model, classes);
    ValueFunction U = initial_upper(model, classes);
    const auto scc = scc_decomposition(model);

    SolverResult result;
    result.status = SolverStatus::Precise;
    std::uint64_t si_rounds = 0;
    for (std::size_t c = scc.components.size(); c-- > 0;) {
        const auto& comp = scc.components[c];
        if (!classes.is_unknown(comp.front())) continue;

        SolverStatus status;
        if (inner == InnerSolver::Naive) {
            status = detail::run_vi(ctx, model, comp, L, cfg.effective_naive_epsilon());
            for (StateId s : comp) U[s] = L[s];
        } else {
            status = detail::run_bvi(ctx, model, comp, L, U, 0);
        }
        if (status == SolverStatus::Timeout) {
            result.status = status;
            result.diagnostics = "timeout in " + describe_scc(c, comp);
            break;
        }

        // Guess strategies from the bounds and evaluate them exactly.
        const auto game = detail::build_local_game(model, comp, L);
        std::vector<std::vector<ActionIndex>> sigma(comp.size());
        std::vector<ActionIndex> tau(comp.size(), 0);
        for (std::size_t i = 0; i < comp.size(); ++i) {
            const StateId s = comp[i];
            const auto na = static_cast<ActionIndex>(model.num_actions(s));
            if (model.is_maximizer(s)) {
                double best = -1.0;
                for (ActionIndex a = 0; a < na; ++a) best = std::max(best, model.action_value(s, a, L));
                for (ActionIndex a = 0; a < na; ++a)
                    if (model.action_value(s, a, L) == best) sigma[i].push_back(a);
            } else {
                double best = 2.0;
                for (ActionIndex a = 0; a < na; ++a) {
                    const double v = model.action_value(s, a, U);
                    if (v < best) {
                        best = v;
                        tau[i] = a;
                    }
                }
                sigma[i] = {tau[i]};
            }
        }

        std::vector<double> values;
        try {
            values = detail::evaluate(game, sigma);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(e.what()) + " in " + describe_scc(c, comp));
        }

        bool optimal = true;
        for (std::size_t i = 0; i < comp.size() && optimal; ++i) {
            const auto& acts = game.actions[i];
            if (acts.size() < 2) continue;
            double best_max = -1.0, best_min = 2.0;
            for (ActionIndex a = 0; a < acts.size(); ++a) {
                const double v = game.action_value(static_cast<std::uint32_t>(i), a, values);
                best_max = std::max(best_max, v);
                best_min = std::min(best_min, v);
            }
            if (model.is_maximizer(comp[i])) {
                for (ActionIndex a : sigma[i])
                    if (game.action_value(static_cast<std::uint32_t>(i), a, values) < best_max - kStrategyTolerance)
                        optimal = false;
            } else if (game.action_value(static_cast<std::uint32_t>(i), tau[i], values) >
                       best_min + kStrategyTolerance) {
                optimal = false;
            }
        }

        if (optimal) {
            ++result.local_checks_passed;
        } else {
            ++result.local_checks_failed;
            const auto si = detail::run_si(ctx, model, game, tau, values, si_rounds);
            if (si == SolverStatus::Timeout) {
                result.status = si;
                result.diagnostics = "timeout in strategy iteration for " + describe_scc(c, comp);
                break;
            }
        }
        for (std::size_t i = 0; i < comp.size(); ++i) L[comp[i]] = U[comp[i]] = values[i];
    }
    ctx.finish(result);
    if (result.status != SolverStatus::Precise) {
        // Unfinished components keep their trivial bounds.
        result.lower = std::move(L);
        result.upper = std::move(U);
    } else {
        result.lower = L;
        result.upper = std::move(L);
    }
    return result;
}

SolverResult solve(const SsgModel& model, const SolverConfig& cfg, const SolveOptions& options) {
    const auto classes = classify_states(model);
    switch (options.algorithm) {
        case Algorithm::VI: return solve_vi(model, classes, cfg);
        case Algorithm::BVI: return solve_bvi(model, classes, cfg);
        case Algorithm::OVI: return solve_ovi(model, classes, cfg);
        case Algorithm::TVI: return solve_topological(model, classes, cfg, options.topological_inner);
        case Algorithm::PTVI: return solve_ptvi(model, classes, cfg, options.ptvi_inner);
        case Algorithm::SI: return solve_si(model, classes, {}, cfg);
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace ssg
