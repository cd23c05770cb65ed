#include "ssg/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssg {

double diff(double old_value, double new_value, DiffMode mode) {
    const double d = new_value - old_value;
    if (mode == DiffMode::Absolute) return d;
    if (new_value == 0.0) return old_value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return d / new_value;
}

double diff_plus(double x, double eps, DiffMode mode) {
    if (x == 0.0) return 0.0;
    if (mode == DiffMode::Relative) return std::min(1.0, x * (1.0 + eps));
    double r = std::min(1.0, x + eps);
    while (r - x > eps) r = std::nextafter(r, x);
    return r;
}

ValueFunction initial_lower(const SsgModel& model, const StateClasses& classes) {
    ValueFunction L(model.num_states(), 0.0);
    for (StateId g : classes.goals) L[g] = 1.0;
    return L;
}

ValueFunction initial_upper(const SsgModel& model, const StateClasses& classes) {
    ValueFunction U(model.num_states(), 1.0);
    for (StateId z : classes.sinks) U[z] = 0.0;
    return U;
}

double state_backup(const SsgModel& model, StateId s, const ValueFunction& f) {
    const std::size_t begin = model.action_begin(s);
    const std::size_t end = begin + model.num_actions(s);
    const bool maximize = model.is_maximizer(s);
    double best = maximize ? -1.0 : 2.0;
    for (std::size_t g = begin; g < end; ++g) {
        double v = 0.0;
        for (const auto& t : model.transitions_of(g)) v += t.prob * f[t.target];
        best = maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

void bellman_sweep(const SsgModel& model, const StateClasses& classes, ValueFunction& f,
                   bool gauss_seidel) {
    for (StateId g : classes.goals) f[g] = 1.0;
    for (StateId z : classes.sinks) f[z] = 0.0;
    if (gauss_seidel) {
        for (StateId s : classes.unknown) f[s] = state_backup(model, s, f);
        return;
    }
    const ValueFunction old = f;
    for (StateId s : classes.unknown) f[s] = state_backup(model, s, old);
}

ValueFunction bellman_update(const SsgModel& model, const StateClasses& classes,
                             const ValueFunction& f, bool gauss_seidel) {
    ValueFunction out = f;
    bellman_sweep(model, classes, out, gauss_seidel);
    return out;
}

void deflate(const SsgModel& model, const std::vector<EcCandidate>& candidates, ValueFunction& U) {
    if (candidates.empty()) return;
    // All exits are read from the same U so the result is order independent.
    std::vector<std::uint8_t> in_T(model.num_states(), 0);
    std::vector<double> exits;
    exits.reserve(candidates.size());
    for (const auto& ec : candidates) {
        for (StateId s : ec.states) in_T[s] = 1;
        exits.push_back(best_exit(model, ec.states, in_T, U));
        for (StateId s : ec.states) in_T[s] = 0;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (StateId s : candidates[i].states) U[s] = std::min(U[s], exits[i]);
}

ValueFunction deflate_update(const SsgModel& model, const StateClasses& classes,
                             const ValueFunction& U, const ValueFunction& L, bool gauss_seidel) {
    ValueFunction out = bellman_update(model, classes, U, gauss_seidel);
    deflate(model, find_sec_candidates(model, classes, L), out);
    return out;
}

}  // namespace ssg
