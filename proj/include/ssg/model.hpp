#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssg {

using StateId = std::uint32_t;
using ActionIndex = std::uint32_t;

/// Sentinel for "no action chosen" in strategy tables.
inline constexpr ActionIndex kNoAction = std::numeric_limits<ActionIndex>::max();

enum class Player : std::uint8_t { Maximizer, Minimizer };

struct Transition {
    StateId target;
    double prob;

    friend bool operator==(const Transition&, const Transition&) = default;
};

using Distribution = std::vector<Transition>;

/// Values per state (V, L, U, ...). Indexed by StateId.
using ValueFunction = std::vector<double>;

/// Relative error window inside which a distribution sum is treated as a
/// rounding artefact and repaired by recomputing the closing entry.
inline constexpr double kClosingRepairWindow = 1e-9;

/// Tolerance used by validate_model for the sum-to-one check.
inline constexpr double kSumTolerance = 1e-12;

/// Recomputes the last entry as 1 minus the left-to-right sum of the others
/// when the distribution is within kClosingRepairWindow of summing to one.
/// Distributions further away are left untouched so validation can flag them.
void close_distribution(Distribution& dist);

/// Left-to-right sum of the probabilities.
double probability_mass(std::span<const Transition> dist);

/// Immutable simple stochastic game with reachability objective.
///
/// Storage is compressed: actions of state s occupy the global action range
/// [action_begin(s), action_begin(s + 1)), and transitions of global action g
/// occupy [transition_begin(g), transition_begin(g + 1)).
class SsgModel {
public:
    SsgModel() = default;

    std::size_t num_states() const { return owner_.size(); }
    std::size_t num_actions() const { return labels_.size(); }
    std::size_t num_transitions() const { return transitions_.size(); }

    Player owner(StateId s) const { return owner_[s]; }
    bool is_maximizer(StateId s) const { return owner_[s] == Player::Maximizer; }
    StateId initial() const { return initial_; }
    const std::vector<StateId>& goals() const { return goals_; }
    bool is_goal(StateId s) const { return is_goal_[s] != 0; }

    std::size_t num_actions(StateId s) const { return state_offsets_[s + 1] - state_offsets_[s]; }
    std::size_t action_begin(StateId s) const { return state_offsets_[s]; }

    /// Global action id of the a-th action of s.
    std::size_t global_action(StateId s, ActionIndex a) const { return state_offsets_[s] + a; }

    std::span<const Transition> transitions(StateId s, ActionIndex a) const {
        return transitions_of(global_action(s, a));
    }
    std::span<const Transition> transitions_of(std::size_t global) const {
        return {transitions_.data() + action_offsets_[global],
                action_offsets_[global + 1] - action_offsets_[global]};
    }
    const std::string& label(StateId s, ActionIndex a) const { return labels_[global_action(s, a)]; }

    /// Expected value of f after playing action a in s.
    double action_value(StateId s, ActionIndex a, const ValueFunction& f) const {
        double sum = 0.0;
        for (const auto& t : transitions(s, a)) sum += t.prob * f[t.target];
        return sum;
    }

    friend bool operator==(const SsgModel&, const SsgModel&) = default;

private:
    friend class ModelBuilder;

    std::vector<Player> owner_;
    std::vector<std::uint8_t> is_goal_;
    std::vector<StateId> goals_;
    StateId initial_ = 0;
    std::vector<std::size_t> state_offsets_{0};
    std::vector<std::size_t> action_offsets_{0};
    std::vector<Transition> transitions_;
    std::vector<std::string> labels_;
};

/// Mutable construction front-end for SsgModel.
///
/// build() normalizes the model: goal states become absorbing (their actions
/// are replaced by a single probability-1 self-loop unless they already are
/// one) and every distribution gets its closing entry recomputed. It does not
/// reject invalid input; use validate_model on the result.
class ModelBuilder {
public:
    explicit ModelBuilder(std::size_t num_states);

    std::size_t num_states() const { return owner_.size(); }

    ModelBuilder& set_owner(StateId s, Player p);
    ModelBuilder& set_initial(StateId s);
    ModelBuilder& add_goal(StateId s);

    /// Appends an action to s and returns its index within s.
    ActionIndex add_action(StateId s, std::string label, Distribution dist);

    std::size_t num_actions(StateId s) const { return actions_.at(s).size(); }

    SsgModel build() const;

private:
    struct PendingAction {
        std::string label;
        Distribution dist;
    };

    void check_state(StateId s) const;

    std::vector<Player> owner_;
    std::vector<StateId> goals_;
    StateId initial_ = 0;
    std::vector<std::vector<PendingAction>> actions_;
};

enum class ViolationKind {
    BlockingState,
    TargetOutOfRange,
    NonPositiveProbability,
    DuplicateTarget,
    SumNotOne,
    GoalNotAbsorbing,
    InitialOutOfRange,
    GoalOutOfRange,
    NoStates,
};

struct Violation {
    ViolationKind kind;
    StateId state = 0;
    ActionIndex action = kNoAction;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(ViolationKind kind) const;
    std::string to_string() const;
};

ValidationReport validate_model(const SsgModel& model);

/// Thrown when a model fails validation where a valid model is required.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(ValidationReport report);
    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Successor set of (s, a), sorted ascending. Throws std::out_of_range for an
/// invalid action index.
std::vector<StateId> post(const SsgModel& model, StateId s, ActionIndex a);

/// Deterministic Minimizer strategy: choice[s] for Minimizer states,
/// kNoAction elsewhere.
struct MinStrategy {
    std::vector<ActionIndex> choice;
};

/// Randomized Maximizer strategy: each supported action is played with
/// probability 1/|support[s]|. Empty for Minimizer states.
struct MaxStrategy {
    std::vector<std::vector<ActionIndex>> support;
};

struct MarkovChain {
    std::vector<Distribution> rows;
    std::vector<std::uint8_t> is_goal;

    std::size_t num_states() const { return rows.size(); }
};

/// Markov chain obtained by fixing both strategies. Maximizer rows are the
/// uniform mixture of the supported actions with duplicate targets merged.
/// Throws std::invalid_argument when a strategy entry is missing or invalid.
MarkovChain induced_markov_chain(const SsgModel& model, const MaxStrategy& sigma,
                                 const MinStrategy& tau);

}  // namespace ssg
