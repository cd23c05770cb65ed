#include "ssg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ssg/graph.hpp"

namespace ssg {

const std::array<const char*, FeatureReport::kCount>& FeatureReport::names() {
    static const std::array<const char*, kCount> n = {
        "num_states",      "sinks_pct",           "unknown_pct",    "min_states_pct",
        "num_max_actions", "avg_actions_per_state", "prob_actions_pct", "num_max_transitions",
        "avg_trans_per_action", "smallest_trans_prob", "num_mecs",   "biggest_mec_pct",
        "avg_mec_pct",     "num_sccs",            "biggest_scc_pct", "avg_scc_pct",
        "max_scc_depth",   "num_non_singleton_sccs", "smallest_scc_non_sing", "avg_scc_non_sing_pct"};
    return n;
}

std::array<double, FeatureReport::kCount> FeatureReport::values() const {
    return {num_states,       sinks_pct,          unknown_pct,     min_states_pct,
            num_max_actions,  avg_actions_per_state, prob_actions_pct, num_max_transitions,
            avg_trans_per_action, smallest_trans_prob, num_mecs,    biggest_mec_pct,
            avg_mec_pct,      num_sccs,           biggest_scc_pct, avg_scc_pct,
            max_scc_depth,    num_non_singleton_sccs, smallest_scc_non_sing, avg_scc_non_sing_pct};
}

FeatureReport compute_features(const SsgModel& model) {
    FeatureReport r;
    const std::size_t n = model.num_states();
    if (n == 0) return r;
    const double dn = static_cast<double>(n);
    const auto classes = classify_states(model);

    r.num_states = dn;
    r.sinks_pct = static_cast<double>(classes.sinks.size()) / dn;
    r.unknown_pct = static_cast<double>(classes.unknown.size()) / dn;

    std::size_t minimizers = 0, max_actions = 0, prob_actions = 0, max_trans = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (StateId s = 0; s < n; ++s) {
        if (!model.is_maximizer(s)) ++minimizers;
        max_actions = std::max(max_actions, model.num_actions(s));
        for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
            const auto d = model.transitions(s, a);
            if (d.size() >= 2) ++prob_actions;
            max_trans = std::max(max_trans, d.size());
            for (const auto& t : d) smallest = std::min(smallest, t.prob);
        }
    }
    const double actions = static_cast<double>(model.num_actions());
    r.min_states_pct = static_cast<double>(minimizers) / dn;
    r.num_max_actions = static_cast<double>(max_actions);
    r.avg_actions_per_state = actions / dn;
    r.prob_actions_pct = actions > 0 ? static_cast<double>(prob_actions) / actions : 0.0;
    r.num_max_transitions = static_cast<double>(max_trans);
    r.avg_trans_per_action = actions > 0 ? static_cast<double>(model.num_transitions()) / actions : 0.0;
    r.smallest_trans_prob = std::isfinite(smallest) ? smallest : 0.0;

    std::size_t mec_count = 0, mec_biggest = 0, mec_total = 0;
    for (const auto& mec : mec_decomposition(model)) {
        if (!classes.is_unknown(mec.states.front())) continue;
        ++mec_count;
        mec_biggest = std::max(mec_biggest, mec.states.size());
        mec_total += mec.states.size();
    }
    r.num_mecs = static_cast<double>(mec_count);
    r.biggest_mec_pct = static_cast<double>(mec_biggest) / dn;
    r.avg_mec_pct = mec_count ? static_cast<double>(mec_total) / static_cast<double>(mec_count) / dn : 0.0;

    const auto scc = scc_decomposition(model);
    const std::size_t k = scc.components.size();
    std::size_t biggest = 0, non_single = 0, non_single_total = 0;
    std::size_t smallest_non_single = std::numeric_limits<std::size_t>::max();
    for (const auto& c : scc.components) {
        biggest = std::max(biggest, c.size());
        if (c.size() > 1) {
            ++non_single;
            non_single_total += c.size();
            smallest_non_single = std::min(smallest_non_single, c.size());
        }
    }
    // Longest path in the component DAG, counted in components. Components
    // are topologically sorted, so one backward pass suffices.
    std::vector<std::size_t> depth(k, 1);
    for (std::size_t c = k; c-- > 0;) {
        for (StateId s : scc.components[c]) {
            for (ActionIndex a = 0; a < model.num_actions(s); ++a) {
                for (const auto& t : model.transitions(s, a)) {
                    const auto d = scc.component_of[t.target];
                    if (d != c) depth[c] = std::max(depth[c], depth[d] + 1);
                }
            }
        }
    }
    r.num_sccs = static_cast<double>(k);
    r.biggest_scc_pct = static_cast<double>(biggest) / dn;
    r.avg_scc_pct = k ? 1.0 / static_cast<double>(k) : 0.0;
    r.max_scc_depth = k ? static_cast<double>(*std::max_element(depth.begin(), depth.end())) : 0.0;
    r.num_non_singleton_sccs = static_cast<double>(non_single);
    r.smallest_scc_non_sing = non_single ? static_cast<double>(smallest_non_single) : 0.0;
    r.avg_scc_non_sing_pct =
        non_single ? static_cast<double>(non_single_total) / static_cast<double>(non_single) / dn : 0.0;
    return r;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty list");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
}

CorpusStats aggregate_features(const std::vector<FeatureReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("cannot aggregate an empty corpus");
    CorpusStats stats;
    stats.count = reports.size();
    for (std::size_t f = 0; f < FeatureReport::kCount; ++f) {
        std::vector<double> column;
        column.reserve(reports.size());
        for (const auto& r : reports) column.push_back(r.values()[f]);
        auto& fs = stats.features[f];
        fs.mean = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
        fs.median = percentile(column, 0.5);
        fs.p10 = percentile(column, 0.10);
        fs.p25 = percentile(column, 0.25);
        fs.p75 = percentile(column, 0.75);
        fs.p90 = percentile(column, 0.90);
        for (double v : column)
            if (v < fs.p10 || v > fs.p90) fs.outliers.push_back(v);
    }
    return stats;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string feature_csv_header() {
    std::string out = "model";
    for (const char* name : FeatureReport::names()) {
        out += ',';
        out += name;
    }
    return out;
}

std::string feature_csv_row(const std::string& name, const FeatureReport& report) {
    std::string out = name;
    for (double v : report.values()) {
        out += ',';
        out += num(v);
    }
    return out;
}

std::string stats_csv(const CorpusStats& stats) {
    std::ostringstream out;
    out << "feature,count,median,mean,p10,p25,p75,p90,outliers\n";
    for (std::size_t f = 0; f < FeatureReport::kCount; ++f) {
        const auto& s = stats.features[f];
        out << FeatureReport::names()[f] << ',' << stats.count << ',' << num(s.median) << ',' << num(s.mean) << ','
            << num(s.p10) << ',' << num(s.p25) << ',' << num(s.p75) << ',' << num(s.p90) << ',';
        for (std::size_t i = 0; i < s.outliers.size(); ++i) out << (i ? ";" : "") << num(s.outliers[i]);
        out << '\n';
    }
    return out.str();
}

}  // namespace ssg
