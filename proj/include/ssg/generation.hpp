#pragma once

#include <cstdint>
#include <string>

#include "ssg/model.hpp"
#include "ssg/rng.hpp"

namespace ssg {

struct FillOptions {
    /// Smallest increment; increments are min_prob + (1 - min_prob) * u with
    /// u uniform in (0, 1]. 0 gives plain uniform (0, 1] increments.
    double min_prob = 1e-4;
    /// Cap on entries per action; 0 means unlimited.
    std::size_t max_transitions = 0;
    /// Redraw (up to 100 times) when the closing entry falls below min_prob.
    bool strict = false;
};

/// Completes dist, whose mass must be below 1, with targets drawn uniformly
/// from [first, first + count) among those not yet present. Returns the
/// number of entries added.
std::size_t fill_action(Distribution& dist, StateId first, std::size_t count, Rng& rng,
                        const FillOptions& options);

struct GenParams {
    std::size_t n = 10;
    double minimizer_prob = 0.5;
    /// Continuation probability of the geometric number of extra actions.
    double extra_action_geom = 0.85;
    double min_prob = 1e-4;
    std::size_t max_transitions_per_action = 0;
    bool strict = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Random game where every state is reachable from state 0; state n-1 is
/// the only goal.
SsgModel generate_random(const GenParams& params);

struct TreeParams {
    std::size_t n = 10;
    std::size_t k = 2;
    double minimizer_prob = 0.5;
    double extra_action_geom = 0.85;
    double min_prob = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Breadth-first tree: inner nodes have k actions, the i-th aimed at child
/// i mod (number of children). Leaves receive their actions afterwards. The
/// last node, n-1, is the goal.
SsgModel generate_tree(const TreeParams& params);

struct SccChainParams {
    std::size_t n = 30;
    std::size_t scc_size_min = 5;
    std::size_t scc_size_max = 10;
    double minimizer_prob = 0.5;
    double extra_action_geom = 0.85;
    double min_prob = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Chain of strongly connected random blocks followed by a goal and a sink
/// (the two last states). The last block holds the only action reaching them.
SsgModel generate_scc_chain(const SccChainParams& params);

enum class HandcraftedKind { TviChain, OviEasy, OviHard, SimpleScc };

HandcraftedKind parse_handcrafted_kind(const std::string& name);
std::string to_string(HandcraftedKind kind);

/// tvi-chain: n chain states, then goal t = n and sink z = n + 1.
/// ovi-easy / ovi-hard: n chain states, goal n, sink n + 1.
/// simple-scc: n states in m trees, goal n, sink n + 1.
SsgModel handcrafted(HandcraftedKind kind, std::size_t n, std::size_t m = 1);

}  // namespace ssg
