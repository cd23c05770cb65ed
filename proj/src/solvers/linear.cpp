#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "engine.hpp"

namespace ssg {
namespace detail {

namespace {

// Above this many unknowns the system is handed to a sparse LU.
constexpr std::size_t kDenseLimit = 400;

using Rows = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

std::vector<double> solve_dense(const Rows& rows, const std::vector<double>& goal_mass,
                                const std::vector<std::uint32_t>& kept, const std::vector<std::uint32_t>& index) {
    const std::size_t r = kept.size();
    std::vector<double> a(r * (r + 1), 0.0);
    const std::size_t w = r + 1;
    for (std::size_t i = 0; i < r; ++i) {
        const std::uint32_t s = kept[i];
        a[i * w + i] += 1.0;
        for (const auto& [t, p] : rows[s])
            if (index[t] != UINT32_MAX) a[i * w + index[t]] -= p;
        a[i * w + r] = goal_mass[s];
    }
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t pivot = col;
        for (std::size_t i = col + 1; i < r; ++i)
            if (std::abs(a[i * w + col]) > std::abs(a[pivot * w + col])) pivot = i;
        if (std::abs(a[pivot * w + col]) < 1e-300) throw std::runtime_error("singular Markov chain system");
        if (pivot != col)
            for (std::size_t j = col; j < w; ++j) std::swap(a[col * w + j], a[pivot * w + j]);
        const double d = a[col * w + col];
        for (std::size_t i = col + 1; i < r; ++i) {
            const double f = a[i * w + col] / d;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < w; ++j) a[i * w + j] -= f * a[col * w + j];
        }
    }
    std::vector<double> x(r, 0.0);
    for (std::size_t i = r; i-- > 0;) {
        double v = a[i * w + r];
        for (std::size_t j = i + 1; j < r; ++j) v -= a[i * w + j] * x[j];
        x[i] = v / a[i * w + i];
    }
    return x;
}

std::vector<double> solve_sparse(const Rows& rows, const std::vector<double>& goal_mass,
                                 const std::vector<std::uint32_t>& kept, const std::vector<std::uint32_t>& index) {
    const auto r = static_cast<Eigen::Index>(kept.size());
    std::vector<Eigen::Triplet<double>> entries;
    Eigen::VectorXd b(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        const std::uint32_t s = kept[static_cast<std::size_t>(i)];
        entries.emplace_back(i, i, 1.0);
        for (const auto& [t, p] : rows[s])
            if (index[t] != UINT32_MAX) entries.emplace_back(i, index[t], -p);
        b[i] = goal_mass[s];
    }
    Eigen::SparseMatrix<double> m(r, r);
    m.setFromTriplets(entries.begin(), entries.end());
    m.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) throw std::runtime_error("singular Markov chain system");
    Eigen::VectorXd x = lu.solve(b);
    if (lu.info() != Eigen::Success) throw std::runtime_error("Markov chain solve failed");
    return {x.data(), x.data() + r};
}

}  // namespace

std::vector<double> solve_absorbing(const Rows& rows, const std::vector<double>& goal_mass) {
    const std::size_t k = rows.size();
    // States that reach the goal mass with positive probability.
    std::vector<std::vector<std::uint32_t>> pred(k);
    for (std::uint32_t s = 0; s < k; ++s)
        for (const auto& [t, p] : rows[s])
            if (p > 0.0) pred[t].push_back(s);
    std::vector<std::uint8_t> reach(k, 0);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < k; ++s) {
        if (goal_mass[s] > 0.0) {
            reach[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        for (auto p : pred[s]) {
            if (!reach[p]) {
                reach[p] = 1;
                queue.push_back(p);
            }
        }
    }
    std::vector<std::uint32_t> kept, index(k, UINT32_MAX);
    for (std::uint32_t s = 0; s < k; ++s) {
        if (reach[s]) {
            index[s] = static_cast<std::uint32_t>(kept.size());
            kept.push_back(s);
        }
    }
    std::vector<double> values(k, 0.0);
    if (kept.empty()) return values;
    const auto x = kept.size() <= kDenseLimit ? solve_dense(rows, goal_mass, kept, index)
                                              : solve_sparse(rows, goal_mass, kept, index);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::runtime_error("Markov chain solve produced a non-finite value");
        values[kept[i]] = std::clamp(x[i], 0.0, 1.0);
    }
    return values;
}

LocalGame build_local_game(const SsgModel& model, Region states, const ValueFunction& outside) {
    LocalGame game;
    game.states.assign(states.begin(), states.end());
    game.actions.resize(states.size());
    // Regions are sorted, so local indices come from a binary search.
    auto local = [&](StateId t) -> std::uint32_t {
        auto it = std::lower_bound(game.states.begin(), game.states.end(), t);
        if (it != game.states.end() && *it == t) return static_cast<std::uint32_t>(it - game.states.begin());
        return UINT32_MAX;
    };
    for (std::uint32_t i = 0; i < states.size(); ++i) {
        const StateId s = states[i];
        auto& acts = game.actions[i];
        acts.resize(model.num_actions(s));
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            for (const auto& t : model.transitions(s, a)) {
                const auto j = local(t.target);
                if (j == UINT32_MAX)
                    acts[a].goal_mass += t.prob * outside[t.target];
                else
                    acts[a].inner.emplace_back(j, t.prob);
            }
        }
    }
    return game;
}

std::vector<double> evaluate(const LocalGame& game, const std::vector<std::vector<ActionIndex>>& choices) {
    const std::size_t k = game.size();
    Rows rows(k);
    std::vector<double> goal_mass(k, 0.0);
    for (std::size_t s = 0; s < k; ++s) {
        const double w = 1.0 / static_cast<double>(choices[s].size());
        for (ActionIndex a : choices[s]) {
            const auto& act = game.actions[s][a];
            goal_mass[s] += w * act.goal_mass;
            for (const auto& [t, p] : act.inner) rows[s].emplace_back(t, w * p);
        }
    }
    return solve_absorbing(rows, goal_mass);
}

}  // namespace detail

ValueFunction solve_markov_chain(const MarkovChain& chain) {
    const std::size_t n = chain.num_states();
    if (chain.is_goal.size() != n) throw std::invalid_argument("goal marks do not match the chain size");
    detail::Rows rows(n);
    std::vector<double> goal_mass(n, 0.0);
    for (std::uint32_t s = 0; s < n; ++s) {
        if (chain.is_goal[s]) continue;
        for (const auto& t : chain.rows[s]) {
            if (t.target >= n) throw std::invalid_argument("chain target out of range");
            if (chain.is_goal[t.target])
                goal_mass[s] += t.prob;
            else
                rows[s].emplace_back(t.target, t.prob);
        }
    }
    auto values = detail::solve_absorbing(rows, goal_mass);
    for (std::uint32_t s = 0; s < n; ++s)
        if (chain.is_goal[s]) values[s] = 1.0;
    return values;
}

}  // namespace ssg
