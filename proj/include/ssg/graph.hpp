#pragma once

#include <cstdint>
#include <vector>

#include "ssg/model.hpp"

namespace ssg {

enum class StateKind : std::uint8_t { Goal, Sink, Unknown };

struct StateClasses {
    std::vector<StateId> goals;
    std::vector<StateId> sinks;
    std::vector<StateId> unknown;
    std::vector<StateKind> kind;

    bool is_unknown(StateId s) const { return kind[s] == StateKind::Unknown; }
    bool is_sink(StateId s) const { return kind[s] == StateKind::Sink; }
    bool is_goal(StateId s) const { return kind[s] == StateKind::Goal; }
};

/// Sinks are the states that cannot reach a goal in the support graph.
StateClasses classify_states(const SsgModel& model);

struct SccDecomposition {
    /// Components in topological order: every edge goes to the same or a
    /// later component. Iterate backwards for bottom-up processing.
    std::vector<std::vector<StateId>> components;
    /// Index of the component containing each state.
    std::vector<std::uint32_t> component_of;
};

SccDecomposition scc_decomposition(const SsgModel& model);

/// SCCs of the subgraph induced by the states with state_mask set, using
/// only actions with action_mask set (indexed by global action id). Edges to
/// states outside the mask are ignored. Same ordering as scc_decomposition.
SccDecomposition scc_decomposition(const SsgModel& model, const std::vector<std::uint8_t>& state_mask,
                                   const std::vector<std::uint8_t>& action_mask);

struct EcCandidate {
    std::vector<StateId> states;  // sorted
    /// actions[i] lists the witness action indices of states[i].
    std::vector<std::vector<ActionIndex>> actions;
};

std::vector<EcCandidate> mec_decomposition(const SsgModel& model);

/// MECs of the sub-game that only uses actions with action_mask set.
std::vector<EcCandidate> mec_decomposition(const SsgModel& model,
                                           const std::vector<std::uint8_t>& action_mask);

/// Guesses simple end components from a lower bound L: Minimizer states keep
/// only their L-minimal actions (exact ties), Maximizer states keep all
/// actions, and the MECs of that sub-game lying in the unknown part are
/// returned.
std::vector<EcCandidate> find_sec_candidates(const SsgModel& model, const StateClasses& classes,
                                             const ValueFunction& L);
std::vector<EcCandidate> find_sec_candidates(const SsgModel& model, const ValueFunction& L);

/// Highest f-value of a Maximizer action leaving T; 0 if there is none.
double best_exit(const SsgModel& model, const std::vector<StateId>& T, const ValueFunction& f);

/// Same, with membership of T given as a mask over all states.
double best_exit(const SsgModel& model, const std::vector<StateId>& T,
                 const std::vector<std::uint8_t>& in_T, const ValueFunction& f);

/// True when (states, actions) satisfies the end-component definition.
bool is_end_component(const SsgModel& model, const EcCandidate& ec);

}  // namespace ssg
