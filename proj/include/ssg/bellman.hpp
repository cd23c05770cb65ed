#pragma once

#include "ssg/graph.hpp"
#include "ssg/model.hpp"

namespace ssg {

enum class DiffMode { Absolute, Relative };

double diff(double old_value, double new_value, DiffMode mode);

/// Optimistic guess used by OVI, capped at 1. In absolute mode the result r
/// also satisfies r - x <= eps when evaluated in floating point.
double diff_plus(double x, double eps, DiffMode mode);

/// L0: 1 on goals, 0 elsewhere.
ValueFunction initial_lower(const SsgModel& model, const StateClasses& classes);
/// U0: 0 on sinks, 1 elsewhere.
ValueFunction initial_upper(const SsgModel& model, const StateClasses& classes);

/// max/min over actions of the expected f at one state.
double state_backup(const SsgModel& model, StateId s, const ValueFunction& f);

/// One Bellman sweep in place. Goals are pinned to 1 and sinks to 0.
/// Synchronous sweeps read from a snapshot of f; Gauss-Seidel sweeps visit
/// unknown states in ascending order and read fresh values.
void bellman_sweep(const SsgModel& model, const StateClasses& classes, ValueFunction& f,
                   bool gauss_seidel);

ValueFunction bellman_update(const SsgModel& model, const StateClasses& classes,
                             const ValueFunction& f, bool gauss_seidel);

/// Lowers U to the best exit of each candidate (evaluated on U itself).
void deflate(const SsgModel& model, const std::vector<EcCandidate>& candidates, ValueFunction& U);

/// Bellman update of U followed by deflating with the SEC candidates guessed
/// from L.
ValueFunction deflate_update(const SsgModel& model, const StateClasses& classes,
                             const ValueFunction& U, const ValueFunction& L, bool gauss_seidel);

}  // namespace ssg
