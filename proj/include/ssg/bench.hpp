#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssg/solvers.hpp"

namespace ssg {

struct BenchRecord {
    std::string model_name;
    std::string algorithm;
    double epsilon = 0;
    std::string mode;
    std::uint64_t iterations = 0;
    std::uint64_t verification_phases = 0;
    double wall_time_ms = 0;
    std::string status;  // a solver status, or "error"
    double value_at_initial_lower = 0;
    double value_at_initial_upper = 1;
};

std::string bench_csv_header();
std::string to_csv(const BenchRecord& record);

struct BenchOptions {
    /// Model specs as accepted by load_model.
    std::vector<std::string> models;
    std::vector<Algorithm> algorithms;
    SolverConfig config;
    SolveOptions solve;
    /// Per-run wall-clock limit enforced by killing the worker; 0 disables.
    double run_timeout_s = 60.0;
    std::size_t workers = 1;
    /// Appended to; the header is written only when the file is new or empty.
    std::string csv_path;
};

/// Runs every (model, algorithm) pair in its own forked worker. Each record
/// is appended to the CSV with a single write as soon as it is known.
std::vector<BenchRecord> run_bench(const BenchOptions& options);

/// Display name for a model spec: file name without extension, or the spec.
std::string model_display_name(const std::string& spec);

}  // namespace ssg
