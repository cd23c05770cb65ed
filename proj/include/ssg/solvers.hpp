#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "ssg/bellman.hpp"
#include "ssg/graph.hpp"
#include "ssg/model.hpp"

namespace ssg {

enum class SolverStatus { Converged, Precise, Timeout, IterationCap, Stalled };

enum class Algorithm { VI, BVI, OVI, TVI, PTVI, SI };

/// Inner solver of PTVI. Naive runs plain VI and uses L as both bounds.
enum class InnerSolver { Naive, Bounded };

std::string to_string(SolverStatus status);
std::string to_string(Algorithm algorithm);
std::string to_string(DiffMode mode);
Algorithm parse_algorithm(const std::string& name);
DiffMode parse_diff_mode(const std::string& name);

/// Called after every iteration. upper is null while no sound upper bound is
/// available (plain VI, OVI before verification succeeds).
using IterationObserver = std::function<void(const ValueFunction& lower, const ValueFunction* upper)>;

struct SolverConfig {
    double epsilon = 1e-6;
    /// Naive precision; 0 means "same as epsilon".
    double naive_epsilon = 0.0;
    DiffMode mode = DiffMode::Absolute;
    std::uint64_t deflate_every = 100;
    bool deflate = true;
    bool gauss_seidel = false;
    std::uint64_t max_iterations = 100'000'000;
    /// Cap on single-state Bellman backups; 0 disables it.
    std::uint64_t max_bellman_updates = 0;
    /// Wall-clock limit in seconds; 0 disables it.
    double timeout_s = 0.0;
    /// OVI: end a verification phase early when B^D(U) >= U everywhere.
    bool ovi_lower_check = true;
    /// OVI: keep iterating a copy of L during verification and end the
    /// phase as soon as it exceeds U somewhere.
    bool ovi_crossing_check = false;
    /// Consecutive iterations with bitwise identical bound width before a
    /// topological run reports Stalled. 0 selects the default of 1000.
    std::uint64_t stall_window = 0;
    IterationObserver observer;

    double effective_naive_epsilon() const { return naive_epsilon > 0.0 ? naive_epsilon : epsilon; }
    /// Throws std::invalid_argument on out-of-range settings.
    void validate() const;
};

struct SolverResult {
    ValueFunction lower;
    ValueFunction upper;
    SolverStatus status = SolverStatus::Converged;
    std::uint64_t iterations = 0;
    std::uint64_t verification_phases = 0;
    std::uint64_t bellman_updates = 0;
    std::chrono::duration<double> wall_time{0.0};
    std::uint64_t local_checks_passed = 0;
    std::uint64_t local_checks_failed = 0;
    std::string diagnostics;

    bool ok() const { return status == SolverStatus::Converged || status == SolverStatus::Precise; }
};

/// Plain VI from below with the naive stopping rule. Not sound.
SolverResult solve_vi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg);

/// Interval iteration with deflating every cfg.deflate_every iterations.
SolverResult solve_bvi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg);

/// Optimistic VI: naive VI, guess an upper bound, verify it by induction.
SolverResult solve_ovi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg);

/// Solves SCCs bottom-up with inner in {VI, BVI, OVI}; solved successors are
/// held fixed at their bounds.
SolverResult solve_topological(const SsgModel& model, const StateClasses& classes,
                               const SolverConfig& cfg, Algorithm inner = Algorithm::BVI);

/// Bottom-up solving with exact per-SCC values from guessed strategies.
SolverResult solve_ptvi(const SsgModel& model, const StateClasses& classes, const SolverConfig& cfg,
                        InnerSolver inner = InnerSolver::Bounded);

/// tau picks the lowest-index U-minimal action, sigma all L-maximal actions.
std::pair<MaxStrategy, MinStrategy> extract_strategies(const SsgModel& model, const StateClasses& classes,
                                                       const ValueFunction& L, const ValueFunction& U);

/// Exact reachability probabilities of the chain. Zero-value states are
/// detected by graph search and removed before solving.
ValueFunction solve_markov_chain(const MarkovChain& chain);

/// Tolerance for value comparisons in optimality checks and strategy switches.
inline constexpr double kStrategyTolerance = 1e-9;

bool local_optimality_check(const SsgModel& model, const MaxStrategy& sigma, const MinStrategy& tau,
                            const ValueFunction& values);

/// Strategy iteration. Maximizer improves strategies; every candidate is
/// evaluated against an exact Minimizer best response, which is warm-started
/// from initial_tau when given.
SolverResult solve_si(const SsgModel& model, const StateClasses& classes,
                      const MinStrategy& initial_tau = {}, const SolverConfig& cfg = {});

struct SolveOptions {
    Algorithm algorithm = Algorithm::BVI;
    Algorithm topological_inner = Algorithm::BVI;
    InnerSolver ptvi_inner = InnerSolver::Bounded;
};

SolverResult solve(const SsgModel& model, const SolverConfig& cfg, const SolveOptions& options);

}  // namespace ssg
