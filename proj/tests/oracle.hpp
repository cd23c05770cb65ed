#pragma once
// Brute-force reference values for tiny games. Enumerates every pair of
// pure positional strategies and solves each induced chain by its own
// Gaussian elimination, sharing no code with the library solvers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ssg/model.hpp"

namespace oracle {

using ssg::SsgModel;
using ssg::StateId;

// Reach probabilities of an explicit chain given one action per state.
inline std::vector<double> chain_values(const SsgModel& m, const std::vector<unsigned>& pick) {
    const std::size_t n = m.num_states();
    // States that can reach a goal at all.
    std::vector<char> reach(n, 0);
    for (StateId g : m.goals()) reach[g] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId s = 0; s < n; ++s) {
            if (reach[s]) continue;
            for (const auto& t : m.transitions(s, pick[s]))
                if (reach[t.target]) {
                    reach[s] = 1;
                    changed = true;
                    break;
                }
        }
    }
    std::vector<std::size_t> idx(n, SIZE_MAX);
    std::vector<StateId> vars;
    for (StateId s = 0; s < n; ++s)
        if (reach[s] && !m.is_goal(s)) {
            idx[s] = vars.size();
            vars.push_back(s);
        }
    const std::size_t k = vars.size();
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        a[i][i] = 1.0;
        for (const auto& t : m.transitions(vars[i], pick[vars[i]])) {
            if (m.is_goal(t.target))
                a[i][k] += t.prob;
            else if (idx[t.target] != SIZE_MAX)
                a[i][idx[t.target]] -= t.prob;
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        std::swap(a[c], a[p]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c || a[r][c] == 0.0) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    std::vector<double> v(n, 0.0);
    for (StateId g : m.goals()) v[g] = 1.0;
    for (std::size_t i = 0; i < k; ++i) v[vars[i]] = a[i][k] / a[i][i];
    return v;
}

// V(s) = max over Maximizer choices of min over Minimizer choices.
inline std::vector<double> game_values(const SsgModel& m) {
    const std::size_t n = m.num_states();
    std::vector<StateId> max_states, min_states;
    for (StateId s = 0; s < n; ++s) {
        if (m.num_actions(s) < 2) continue;
        (m.is_maximizer(s) ? max_states : min_states).push_back(s);
    }
    std::vector<unsigned> pick(n, 0);
    std::vector<double> best(n, -1.0);

    auto advance = [&](const std::vector<StateId>& states) {
        for (StateId s : states) {
            if (++pick[s] < m.num_actions(s)) return true;
            pick[s] = 0;
        }
        return false;
    };
    do {
        std::vector<double> worst(n, 2.0);
        for (StateId s : min_states) pick[s] = 0;
        do {
            const auto v = chain_values(m, pick);
            for (StateId s = 0; s < n; ++s) worst[s] = std::min(worst[s], v[s]);
        } while (advance(min_states));
        for (StateId s = 0; s < n; ++s) best[s] = std::max(best[s], worst[s]);
    } while (advance(max_states));
    return best;
}

// Number of pure strategy profiles; used to keep enumeration affordable.
inline double profile_count(const SsgModel& m) {
    double c = 1.0;
    for (StateId s = 0; s < m.num_states(); ++s) c *= static_cast<double>(std::max<std::size_t>(1, m.num_actions(s)));
    return c;
}

}  // namespace oracle
