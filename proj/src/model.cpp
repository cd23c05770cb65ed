#include "ssg/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace ssg {

double probability_mass(std::span<const Transition> dist) {
    double sum = 0.0;
    for (const auto& t : dist) sum += t.prob;
    return sum;
}

void close_distribution(Distribution& dist) {
    if (dist.empty()) return;
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) head += dist[i].prob;
    const double total = head + dist.back().prob;
    if (std::abs(total - 1.0) > kClosingRepairWindow) return;
    const double closing = 1.0 - head;
    if (closing > 0.0) dist.back().prob = closing;
}

// ---------------------------------------------------------------------------
// ModelBuilder

ModelBuilder::ModelBuilder(std::size_t num_states)
    : owner_(num_states, Player::Maximizer), actions_(num_states) {}

void ModelBuilder::check_state(StateId s) const {
    if (s >= owner_.size())
        throw std::out_of_range("state " + std::to_string(s) + " out of range");
}

ModelBuilder& ModelBuilder::set_owner(StateId s, Player p) {
    check_state(s);
    owner_[s] = p;
    return *this;
}

ModelBuilder& ModelBuilder::set_initial(StateId s) {
    check_state(s);
    initial_ = s;
    return *this;
}

ModelBuilder& ModelBuilder::add_goal(StateId s) {
    check_state(s);
    if (std::find(goals_.begin(), goals_.end(), s) == goals_.end()) goals_.push_back(s);
    return *this;
}

ActionIndex ModelBuilder::add_action(StateId s, std::string label, Distribution dist) {
    check_state(s);
    actions_[s].push_back({std::move(label), std::move(dist)});
    return static_cast<ActionIndex>(actions_[s].size() - 1);
}

namespace {

bool is_self_loop(const Distribution& d, StateId s) {
    return d.size() == 1 && d[0].target == s && d[0].prob == 1.0;
}

}  // namespace

SsgModel ModelBuilder::build() const {
    SsgModel m;
    const std::size_t n = owner_.size();
    m.owner_ = owner_;
    m.is_goal_.assign(n, 0);
    m.goals_ = goals_;
    std::sort(m.goals_.begin(), m.goals_.end());
    for (StateId g : m.goals_) m.is_goal_[g] = 1;
    m.initial_ = initial_;
    m.state_offsets_.assign(1, 0);
    m.action_offsets_.assign(1, 0);

    auto push_action = [&m](const std::string& label, Distribution dist) {
        close_distribution(dist);
        m.labels_.push_back(label);
        m.transitions_.insert(m.transitions_.end(), dist.begin(), dist.end());
        m.action_offsets_.push_back(m.transitions_.size());
    };

    for (StateId s = 0; s < n; ++s) {
        const auto& acts = actions_[s];
        if (m.is_goal_[s]) {
            bool absorbing = !acts.empty();
            for (const auto& a : acts) absorbing = absorbing && is_self_loop(a.dist, s);
            if (absorbing) {
                for (const auto& a : acts) push_action(a.label, a.dist);
            } else {
                push_action(acts.empty() ? std::string("loop") : acts.front().label,
                            Distribution{{s, 1.0}});
            }
        } else {
            for (const auto& a : acts) push_action(a.label, a.dist);
        }
        m.state_offsets_.push_back(m.labels_.size());
    }
    return m;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) out << v.message << '\n';
    return out.str();
}

ModelError::ModelError(ValidationReport report)
    : std::runtime_error("invalid model:\n" + report.to_string()), report_(std::move(report)) {}

namespace {

std::string where(const SsgModel& m, StateId s, ActionIndex a) {
    std::ostringstream out;
    out << "state " << s;
    if (a != kNoAction) out << " action " << a << " (" << m.label(s, a) << ")";
    return out.str();
}

}  // namespace

ValidationReport validate_model(const SsgModel& model) {
    ValidationReport report;
    auto add = [&report](ViolationKind kind, StateId s, ActionIndex a, std::string msg) {
        report.violations.push_back({kind, s, a, std::move(msg)});
    };
    const std::size_t n = model.num_states();
    if (n == 0) {
        add(ViolationKind::NoStates, 0, kNoAction, "model has no states");
        return report;
    }
    if (model.initial() >= n)
        add(ViolationKind::InitialOutOfRange, model.initial(), kNoAction, "initial state out of range");
    for (StateId g : model.goals())
        if (g >= n) add(ViolationKind::GoalOutOfRange, g, kNoAction, "goal state out of range");

    std::vector<std::uint8_t> seen(n, 0);
    for (StateId s = 0; s < n; ++s) {
        if (model.num_actions(s) == 0) {
            add(ViolationKind::BlockingState, s, kNoAction, "blocking state: " + where(model, s, kNoAction));
            continue;
        }
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            const auto dist = model.transitions(s, a);
            bool ranges_ok = true;
            for (const auto& t : dist) {
                if (t.target >= n) {
                    add(ViolationKind::TargetOutOfRange, s, a,
                        "target " + std::to_string(t.target) + " out of range: " + where(model, s, a));
                    ranges_ok = false;
                }
                if (!(t.prob > 0.0) || t.prob > 1.0) {
                    add(ViolationKind::NonPositiveProbability, s, a,
                        "probability outside (0,1]: " + where(model, s, a));
                }
            }
            if (ranges_ok) {
                for (const auto& t : dist) {
                    if (seen[t.target]) {
                        add(ViolationKind::DuplicateTarget, s, a,
                            "duplicate target " + std::to_string(t.target) + ": " + where(model, s, a));
                    }
                    seen[t.target] = 1;
                }
                for (const auto& t : dist) seen[t.target] = 0;
            }
            const double sum = probability_mass(dist);
            if (dist.empty() || std::abs(sum - 1.0) > kSumTolerance) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "distribution sum != 1 (" << sum << "): " << where(model, s, a);
                add(ViolationKind::SumNotOne, s, a, msg.str());
            }
            if (model.is_goal(s) && !(dist.size() == 1 && dist[0].target == s)) {
                add(ViolationKind::GoalNotAbsorbing, s, a, "goal not absorbing: " + where(model, s, a));
            }
        }
    }
    return report;
}

std::vector<StateId> post(const SsgModel& model, StateId s, ActionIndex a) {
    if (s >= model.num_states() || a >= model.num_actions(s))
        throw std::out_of_range("no action " + std::to_string(a) + " at state " + std::to_string(s));
    std::vector<StateId> out;
    for (const auto& t : model.transitions(s, a))
        if (t.prob > 0.0) out.push_back(t.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MarkovChain induced_markov_chain(const SsgModel& model, const MaxStrategy& sigma,
                                 const MinStrategy& tau) {
    const std::size_t n = model.num_states();
    MarkovChain chain;
    chain.rows.resize(n);
    chain.is_goal.assign(n, 0);
    for (StateId g : model.goals()) chain.is_goal[g] = 1;

    for (StateId s = 0; s < n; ++s) {
        const std::size_t na = model.num_actions(s);
        // Goals keep their loop regardless of owner.
        if (model.is_goal(s) || na == 1) {
            chain.rows[s].assign(model.transitions(s, 0).begin(), model.transitions(s, 0).end());
            continue;
        }
        if (model.is_maximizer(s)) {
            if (s >= sigma.support.size() || sigma.support[s].empty())
                throw std::invalid_argument("missing Maximizer strategy at state " + std::to_string(s));
            const auto& sup = sigma.support[s];
            if (sup.size() == 1) {
                if (sup[0] >= na) throw std::invalid_argument("invalid action at state " + std::to_string(s));
                auto d = model.transitions(s, sup[0]);
                chain.rows[s].assign(d.begin(), d.end());
                continue;
            }
            const double w = 1.0 / static_cast<double>(sup.size());
            std::map<StateId, double> merged;
            for (ActionIndex a : sup) {
                if (a >= na) throw std::invalid_argument("invalid action at state " + std::to_string(s));
                for (const auto& t : model.transitions(s, a)) merged[t.target] += w * t.prob;
            }
            Distribution row;
            row.reserve(merged.size());
            for (const auto& [t, p] : merged) row.push_back({t, p});
            close_distribution(row);
            chain.rows[s] = std::move(row);
        } else {
            if (s >= tau.choice.size() || tau.choice[s] == kNoAction)
                throw std::invalid_argument("missing Minimizer strategy at state " + std::to_string(s));
            if (tau.choice[s] >= na) throw std::invalid_argument("invalid action at state " + std::to_string(s));
            auto d = model.transitions(s, tau.choice[s]);
            chain.rows[s].assign(d.begin(), d.end());
        }
    }
    return chain;
}

}  // namespace ssg
