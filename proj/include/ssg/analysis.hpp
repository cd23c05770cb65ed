#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ssg/model.hpp"

namespace ssg {

/// Structural features of one model. Fields ending in _pct are fractions of
/// the state count (or of the action count for prob_actions_pct).
struct FeatureReport {
    double num_states = 0;
    double sinks_pct = 0;
    double unknown_pct = 0;
    double min_states_pct = 0;
    double num_max_actions = 0;
    double avg_actions_per_state = 0;
    double prob_actions_pct = 0;
    double num_max_transitions = 0;
    double avg_trans_per_action = 0;
    double smallest_trans_prob = 0;
    double num_mecs = 0;  // MECs inside the unknown part only
    double biggest_mec_pct = 0;
    double avg_mec_pct = 0;
    double num_sccs = 0;
    double biggest_scc_pct = 0;
    double avg_scc_pct = 0;
    double max_scc_depth = 0;  // components on the longest DAG path
    double num_non_singleton_sccs = 0;
    double smallest_scc_non_sing = 0;  // state count
    double avg_scc_non_sing_pct = 0;

    static constexpr std::size_t kCount = 20;
    static const std::array<const char*, kCount>& names();
    std::array<double, kCount> values() const;
};

FeatureReport compute_features(const SsgModel& model);

struct FeatureStats {
    double median = 0, mean = 0, p10 = 0, p25 = 0, p75 = 0, p90 = 0;
    std::vector<double> outliers;  // values outside [p10, p90]
};

struct CorpusStats {
    std::size_t count = 0;
    std::array<FeatureStats, FeatureReport::kCount> features;
};

/// Percentile with linear interpolation between closest ranks; q in [0,1].
double percentile(std::vector<double> values, double q);

/// Throws std::invalid_argument on an empty list.
CorpusStats aggregate_features(const std::vector<FeatureReport>& reports);

/// CSV helpers; the first column is the model name.
std::string feature_csv_header();
std::string feature_csv_row(const std::string& name, const FeatureReport& report);
std::string stats_csv(const CorpusStats& stats);

}  // namespace ssg
