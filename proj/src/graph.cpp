#include "ssg/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace ssg {

namespace {

// Predecessor lists on the support graph (state level).
std::vector<std::vector<StateId>> predecessors(const SsgModel& model) {
    const std::size_t n = model.num_states();
    std::vector<std::vector<StateId>> pred(n);
    for (StateId s = 0; s < n; ++s) {
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            for (const auto& t : model.transitions(s, a)) {
                if (t.prob <= 0.0) continue;
                auto& p = pred[t.target];
                if (p.empty() || p.back() != s) p.push_back(s);
            }
        }
    }
    return pred;
}

}  // namespace

StateClasses classify_states(const SsgModel& model) {
    const std::size_t n = model.num_states();
    StateClasses c;
    c.kind.assign(n, StateKind::Sink);
    const auto pred = predecessors(model);

    std::vector<std::uint8_t> reach(n, 0);
    std::deque<StateId> queue;
    for (StateId g : model.goals()) {
        reach[g] = 1;
        queue.push_back(g);
    }
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        for (StateId p : pred[s]) {
            if (!reach[p]) {
                reach[p] = 1;
                queue.push_back(p);
            }
        }
    }
    for (StateId s = 0; s < n; ++s) {
        if (model.is_goal(s)) {
            c.kind[s] = StateKind::Goal;
            c.goals.push_back(s);
        } else if (reach[s]) {
            c.kind[s] = StateKind::Unknown;
            c.unknown.push_back(s);
        } else {
            c.sinks.push_back(s);
        }
    }
    return c;
}

SccDecomposition scc_decomposition(const SsgModel& model, const std::vector<std::uint8_t>& state_mask,
                                   const std::vector<std::uint8_t>& action_mask) {
    constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
    const std::size_t n = model.num_states();

    SccDecomposition out;
    out.component_of.assign(n, kUnvisited);

    // Iterative Tarjan. Each frame walks the successors of one state as a
    // flat (global action, transition) cursor.
    struct Frame {
        StateId s;
        std::size_t action;
        std::size_t action_end;
        std::size_t trans;
    };
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<StateId> stack;
    std::vector<Frame> frames;
    std::uint32_t counter = 0;
    std::vector<std::vector<StateId>> reversed;

    auto push = [&](StateId s) {
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        const std::size_t b = model.action_begin(s);
        frames.push_back({s, b, b + model.num_actions(s), 0});
    };

    for (StateId root = 0; root < n; ++root) {
        if (!state_mask[root] || index[root] != kUnvisited) continue;
        push(root);
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.action < f.action_end) {
                if (!action_mask[f.action]) {
                    ++f.action;
                    f.trans = 0;
                    continue;
                }
                const auto dist = model.transitions_of(f.action);
                if (f.trans >= dist.size()) {
                    ++f.action;
                    f.trans = 0;
                    continue;
                }
                const StateId t = dist[f.trans++].target;
                if (!state_mask[t]) continue;
                if (index[t] == kUnvisited) {
                    push(t);
                    descended = true;
                    break;
                }
                if (on_stack[t]) low[f.s] = std::min(low[f.s], index[t]);
            }
            if (descended) continue;

            const StateId s = f.s;
            frames.pop_back();
            if (!frames.empty()) {
                const StateId parent = frames.back().s;
                low[parent] = std::min(low[parent], low[s]);
            }
            if (low[s] == index[s]) {
                std::vector<StateId> comp;
                StateId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != s);
                std::sort(comp.begin(), comp.end());
                reversed.push_back(std::move(comp));
            }
        }
    }

    // Tarjan emits bottom components first.
    out.components.assign(std::make_move_iterator(reversed.rbegin()),
                          std::make_move_iterator(reversed.rend()));
    for (std::uint32_t c = 0; c < out.components.size(); ++c)
        for (StateId s : out.components[c]) out.component_of[s] = c;
    return out;
}

SccDecomposition scc_decomposition(const SsgModel& model) {
    return scc_decomposition(model, std::vector<std::uint8_t>(model.num_states(), 1),
                             std::vector<std::uint8_t>(model.num_actions(), 1));
}

std::vector<EcCandidate> mec_decomposition(const SsgModel& model,
                                           const std::vector<std::uint8_t>& action_mask) {
    const std::size_t n = model.num_states();
    std::vector<std::uint8_t> alive_state(n, 1);
    std::vector<std::uint8_t> alive_action(action_mask);
    SccDecomposition scc;

    bool changed = true;
    while (changed) {
        changed = false;
        scc = scc_decomposition(model, alive_state, alive_action);
        for (StateId s = 0; s < n; ++s) {
            if (!alive_state[s]) continue;
            bool has_action = false;
            for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
                const std::size_t g = model.global_action(s, a);
                if (!alive_action[g]) continue;
                bool stays = true;
                for (const auto& t : model.transitions_of(g)) {
                    if (!alive_state[t.target] || scc.component_of[t.target] != scc.component_of[s]) {
                        stays = false;
                        break;
                    }
                }
                if (stays) {
                    has_action = true;
                } else {
                    alive_action[g] = 0;
                    changed = true;
                }
            }
            if (!has_action) {
                alive_state[s] = 0;
                changed = true;
            }
        }
    }

    std::vector<EcCandidate> mecs;
    for (const auto& comp : scc.components) {
        if (!alive_state[comp.front()]) continue;
        EcCandidate ec;
        ec.states = comp;
        for (StateId s : comp) {
            std::vector<ActionIndex> acts;
            for (ActionIndex a = 0; a < model.num_actions(s); ++a)
                if (alive_action[model.global_action(s, a)]) acts.push_back(a);
            ec.actions.push_back(std::move(acts));
        }
        mecs.push_back(std::move(ec));
    }
    return mecs;
}

std::vector<EcCandidate> mec_decomposition(const SsgModel& model) {
    return mec_decomposition(model, std::vector<std::uint8_t>(model.num_actions(), 1));
}

std::vector<EcCandidate> find_sec_candidates(const SsgModel& model, const StateClasses& classes,
                                             const ValueFunction& L) {
    std::vector<std::uint8_t> mask(model.num_actions(), 0);
    for (StateId s : classes.unknown) {
        const std::size_t na = model.num_actions(s);
        const std::size_t base = model.action_begin(s);
        if (model.is_maximizer(s) || na == 1) {
            for (std::size_t a = 0; a < na; ++a) mask[base + a] = 1;
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (ActionIndex a = 0; a < na; ++a) best = std::min(best, model.action_value(s, a, L));
        for (ActionIndex a = 0; a < na; ++a)
            if (model.action_value(s, a, L) == best) mask[base + a] = 1;
    }
    // Actions of goals and sinks stay masked out, so every surviving MEC lies
    // in the unknown part.
    return mec_decomposition(model, mask);
}

std::vector<EcCandidate> find_sec_candidates(const SsgModel& model, const ValueFunction& L) {
    return find_sec_candidates(model, classify_states(model), L);
}

double best_exit(const SsgModel& model, const std::vector<StateId>& T,
                 const std::vector<std::uint8_t>& in_T, const ValueFunction& f) {
    double best = 0.0;
    for (StateId s : T) {
        if (!model.is_maximizer(s)) continue;
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            const auto dist = model.transitions(s, a);
            bool leaves = false;
            double v = 0.0;
            for (const auto& t : dist) {
                v += t.prob * f[t.target];
                if (!in_T[t.target]) leaves = true;
            }
            if (leaves) best = std::max(best, v);
        }
    }
    return best;
}

double best_exit(const SsgModel& model, const std::vector<StateId>& T, const ValueFunction& f) {
    std::vector<std::uint8_t> in_T(model.num_states(), 0);
    for (StateId s : T) in_T[s] = 1;
    return best_exit(model, T, in_T, f);
}

bool is_end_component(const SsgModel& model, const EcCandidate& ec) {
    if (ec.states.empty() || ec.states.size() != ec.actions.size()) return false;
    const std::size_t n = model.num_states();
    std::vector<std::uint8_t> in_T(n, 0), mask(model.num_actions(), 0);
    for (StateId s : ec.states) in_T[s] = 1;
    for (std::size_t i = 0; i < ec.states.size(); ++i) {
        const StateId s = ec.states[i];
        if (ec.actions[i].empty()) return false;
        for (ActionIndex a : ec.actions[i]) {
            if (a >= model.num_actions(s)) return false;
            for (const auto& t : model.transitions(s, a))
                if (!in_T[t.target]) return false;
            mask[model.global_action(s, a)] = 1;
        }
    }
    return scc_decomposition(model, in_T, mask).components.size() == 1;
}

}  // namespace ssg
