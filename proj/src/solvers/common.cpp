#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "engine.hpp"

namespace ssg {

std::string to_string(SolverStatus status) {
    switch (status) {
        case SolverStatus::Converged: return "converged";
        case SolverStatus::Precise: return "precise";
        case SolverStatus::Timeout: return "timeout";
        case SolverStatus::IterationCap: return "iteration-cap";
        case SolverStatus::Stalled: return "stalled";
    }
    return "unknown";
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::VI: return "vi";
        case Algorithm::BVI: return "bvi";
        case Algorithm::OVI: return "ovi";
        case Algorithm::TVI: return "tvi";
        case Algorithm::PTVI: return "ptvi";
        case Algorithm::SI: return "si";
    }
    return "unknown";
}

std::string to_string(DiffMode mode) { return mode == DiffMode::Absolute ? "absolute" : "relative"; }

Algorithm parse_algorithm(const std::string& name) {
    for (auto a : {Algorithm::VI, Algorithm::BVI, Algorithm::OVI, Algorithm::TVI, Algorithm::PTVI, Algorithm::SI})
        if (to_string(a) == name) return a;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

DiffMode parse_diff_mode(const std::string& name) {
    if (name == "absolute") return DiffMode::Absolute;
    if (name == "relative") return DiffMode::Relative;
    throw std::invalid_argument("unknown diff mode '" + name + "'");
}

void SolverConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (naive_epsilon < 0.0) throw std::invalid_argument("naive epsilon must be positive");
    if (deflate_every == 0) throw std::invalid_argument("deflate_every must be at least 1");
    if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
    if (timeout_s < 0.0) throw std::invalid_argument("timeout must be non-negative");
}

namespace detail {

RunContext::RunContext(const SolverConfig& config) : cfg(config), start(Clock::now()) { cfg.validate(); }

bool RunContext::timed_out() const {
    if (cfg.timeout_s <= 0.0) return false;
    return std::chrono::duration<double>(Clock::now() - start).count() >= cfg.timeout_s;
}

std::optional<SolverStatus> RunContext::limit(std::size_t width) const {
    if (iterations >= cfg.max_iterations) return SolverStatus::IterationCap;
    if (cfg.max_bellman_updates != 0 && updates + width > cfg.max_bellman_updates)
        return SolverStatus::IterationCap;
    if (timed_out()) return SolverStatus::Timeout;
    return std::nullopt;
}

void RunContext::finish(SolverResult& result) const {
    result.iterations = iterations;
    result.bellman_updates = updates;
    result.verification_phases = phases;
    result.wall_time = Clock::now() - start;
}

double sweep(const SsgModel& model, Region states, ValueFunction& f, bool gauss_seidel, DiffMode mode,
             std::vector<double>& scratch) {
    double worst = 0.0;
    if (gauss_seidel) {
        for (StateId s : states) {
            const double v = state_backup(model, s, f);
            worst = std::max(worst, std::abs(diff(f[s], v, mode)));
            f[s] = v;
        }
        return worst;
    }
    scratch.resize(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) scratch[i] = state_backup(model, states[i], f);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const StateId s = states[i];
        worst = std::max(worst, std::abs(diff(f[s], scratch[i], mode)));
        f[s] = scratch[i];
    }
    return worst;
}

double max_width(Region states, const ValueFunction& L, const ValueFunction& U, DiffMode mode) {
    double worst = 0.0;
    for (StateId s : states) worst = std::max(worst, diff(L[s], U[s], mode));
    return worst;
}

std::vector<EcCandidate> region_candidates(const SsgModel& model, Region states, const ValueFunction& L) {
    if (states.empty()) return {};
    // A singleton can only be an end component through a sure self-loop.
    if (states.size() == 1) {
        const StateId s = states[0];
        bool loop = false;
        for (ActionIndex a = 0; a < model.num_actions(s) && !loop; ++a) {
            const auto d = model.transitions(s, a);
            loop = d.size() == 1 && d[0].target == s;
        }
        if (!loop) return {};
    }
    StateClasses sub;
    sub.unknown.assign(states.begin(), states.end());
    return find_sec_candidates(model, sub, L);
}

}  // namespace detail
}  // namespace ssg
