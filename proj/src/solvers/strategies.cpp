#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "engine.hpp"

namespace ssg {

std::pair<MaxStrategy, MinStrategy> extract_strategies(const SsgModel& model, const StateClasses& classes,
                                                       const ValueFunction& L, const ValueFunction& U) {
    const std::size_t n = model.num_states();
    MaxStrategy sigma;
    MinStrategy tau;
    sigma.support.resize(n);
    tau.choice.assign(n, kNoAction);
    for (StateId s = 0; s < n; ++s) {
        if (classes.is_goal(s)) continue;
        const auto na = static_cast<ActionIndex>(model.num_actions(s));
        if (model.is_maximizer(s)) {
            double best = -1.0;
            for (ActionIndex a = 0; a < na; ++a) best = std::max(best, model.action_value(s, a, L));
            for (ActionIndex a = 0; a < na; ++a)
                if (model.action_value(s, a, L) == best) sigma.support[s].push_back(a);
        } else {
            double best = 2.0;
            for (ActionIndex a = 0; a < na; ++a) {
                const double v = model.action_value(s, a, U);
                if (v < best) {
                    best = v;
                    tau.choice[s] = a;
                }
            }
        }
    }
    return {std::move(sigma), std::move(tau)};
}

bool local_optimality_check(const SsgModel& model, const MaxStrategy& sigma, const MinStrategy& tau,
                            const ValueFunction& values) {
    for (StateId s = 0; s < model.num_states(); ++s) {
        const auto na = static_cast<ActionIndex>(model.num_actions(s));
        if (model.is_goal(s) || na < 2) continue;
        double best_max = -1.0, best_min = 2.0;
        for (ActionIndex a = 0; a < na; ++a) {
            const double v = model.action_value(s, a, values);
            best_max = std::max(best_max, v);
            best_min = std::min(best_min, v);
        }
        if (model.is_maximizer(s)) {
            if (s >= sigma.support.size() || sigma.support[s].empty()) return false;
            for (ActionIndex a : sigma.support[s])
                if (a >= na || model.action_value(s, a, values) < best_max - kStrategyTolerance) return false;
        } else {
            if (s >= tau.choice.size() || tau.choice[s] >= na) return false;
            if (model.action_value(s, tau.choice[s], values) > best_min + kStrategyTolerance) return false;
        }
    }
    return true;
}

namespace detail {

namespace {

constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();

// Maximizer start: in every state the action closest to a positive exit.
std::vector<ActionIndex> attractor_strategy(const LocalGame& game) {
    const std::size_t k = game.size();
    std::vector<std::vector<std::uint32_t>> pred(k);
    std::vector<std::uint32_t> dist(k, kFar);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < k; ++s) {
        for (const auto& act : game.actions[s]) {
            for (const auto& [t, p] : act.inner) pred[t].push_back(s);
            if (act.goal_mass > 0.0 && dist[s] == kFar) {
                dist[s] = 1;
                queue.push_back(s);
            }
        }
    }
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        for (auto p : pred[s]) {
            if (dist[p] == kFar) {
                dist[p] = dist[s] + 1;
                queue.push_back(p);
            }
        }
    }
    std::vector<ActionIndex> choice(k, 0);
    for (std::uint32_t s = 0; s < k; ++s) {
        std::uint32_t best = kFar;
        for (ActionIndex a = 0; a < game.actions[s].size(); ++a) {
            const auto& act = game.actions[s][a];
            std::uint32_t d = act.goal_mass > 0.0 ? 0 : kFar;
            for (const auto& [t, p] : act.inner) d = std::min(d, dist[t]);
            if (d < best) {
                best = d;
                choice[s] = a;
            }
        }
    }
    return choice;
}

std::vector<std::vector<ActionIndex>> as_choices(const std::vector<ActionIndex>& choice) {
    std::vector<std::vector<ActionIndex>> out(choice.size());
    for (std::size_t s = 0; s < choice.size(); ++s) out[s] = {choice[s]};
    return out;
}

// Exact optimal Minimizer reply to a fixed Maximizer choice. First the set of
// states where the Minimizer can avoid every positive exit forever is fixed
// to staying actions, then policy iteration runs on the rest.
std::vector<double> best_response(RunContext& ctx, const LocalGame& game, const std::vector<std::uint8_t>& is_max,
                                  std::vector<ActionIndex>& choice, bool& timed_out) {
    const std::size_t k = game.size();
    std::vector<std::uint8_t> avoid(k, 1);
    auto stays = [&](std::uint32_t s, ActionIndex a) {
        const auto& act = game.actions[s][a];
        if (act.goal_mass > 0.0) return false;
        for (const auto& [t, p] : act.inner)
            if (!avoid[t]) return false;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t s = 0; s < k; ++s) {
            if (!avoid[s]) continue;
            bool keep;
            if (is_max[s]) {
                keep = stays(s, choice[s]);
            } else {
                keep = false;
                for (ActionIndex a = 0; a < game.actions[s].size() && !keep; ++a) keep = stays(s, a);
            }
            if (!keep) {
                avoid[s] = 0;
                changed = true;
            }
        }
    }
    for (std::uint32_t s = 0; s < k; ++s) {
        if (is_max[s] || !avoid[s]) continue;
        for (ActionIndex a = 0; a < game.actions[s].size(); ++a) {
            if (stays(s, a)) {
                choice[s] = a;
                break;
            }
        }
    }

    for (;;) {
        auto values = evaluate(game, as_choices(choice));
        bool switched = false;
        for (std::uint32_t s = 0; s < k; ++s) {
            if (is_max[s] || avoid[s]) continue;
            const double current = game.action_value(s, choice[s], values);
            double best = current;
            ActionIndex arg = choice[s];
            for (ActionIndex a = 0; a < game.actions[s].size(); ++a) {
                const double v = game.action_value(s, a, values);
                if (v < best) {
                    best = v;
                    arg = a;
                }
            }
            if (best < current - kStrategyTolerance) {
                choice[s] = arg;
                switched = true;
            }
        }
        if (!switched) return values;
        if (ctx.timed_out()) {
            timed_out = true;
            return values;
        }
    }
}

}  // namespace

SolverStatus run_si(RunContext& ctx, const SsgModel& model, const LocalGame& game, std::vector<ActionIndex> tau,
                    std::vector<double>& values, std::uint64_t& rounds) {
    const std::size_t k = game.size();
    values.assign(k, 0.0);
    if (k == 0) return SolverStatus::Precise;

    std::vector<std::uint8_t> is_max(k);
    for (std::size_t s = 0; s < k; ++s) is_max[s] = model.is_maximizer(game.states[s]) ? 1 : 0;

    std::vector<ActionIndex> choice = attractor_strategy(game);
    if (tau.size() == k) {
        for (std::size_t s = 0; s < k; ++s)
            if (!is_max[s] && tau[s] < game.actions[s].size()) choice[s] = tau[s];
    }

    for (;;) {
        ++rounds;
        bool timed_out = false;
        values = best_response(ctx, game, is_max, choice, timed_out);
        if (timed_out || ctx.timed_out()) return SolverStatus::Timeout;

        bool switched = false;
        for (std::uint32_t s = 0; s < k; ++s) {
            if (!is_max[s]) continue;
            const double current = game.action_value(s, choice[s], values);
            double best = current;
            ActionIndex arg = choice[s];
            for (ActionIndex a = 0; a < game.actions[s].size(); ++a) {
                const double v = game.action_value(s, a, values);
                if (v > best) {
                    best = v;
                    arg = a;
                }
            }
            if (best > current + kStrategyTolerance) {
                choice[s] = arg;
                switched = true;
            }
        }
        if (!switched) return SolverStatus::Precise;
    }
}

}  // namespace detail

SolverResult solve_si(const SsgModel& model, const StateClasses& classes, const MinStrategy& initial_tau,
                      const SolverConfig& cfg) {
    detail::RunContext ctx(cfg);
    ValueFunction V = initial_lower(model, classes);
    const auto game = detail::build_local_game(model, classes.unknown, V);

    std::vector<ActionIndex> tau;
    if (!initial_tau.choice.empty()) {
        if (initial_tau.choice.size() != model.num_states())
            throw std::invalid_argument("initial Minimizer strategy does not cover the model");
        for (StateId s : classes.unknown) tau.push_back(initial_tau.choice[s]);
    }
    std::vector<double> local;
    std::uint64_t rounds = 0;
    const auto status = detail::run_si(ctx, model, game, std::move(tau), local, rounds);
    for (std::size_t i = 0; i < game.size(); ++i) V[game.states[i]] = local[i];

    SolverResult r;
    ctx.finish(r);
    r.iterations = rounds;
    r.status = status;
    r.lower = V;
    r.upper = std::move(V);
    return r;
}

}  // namespace ssg
