#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gbsm/bounds.hpp"
#include "gbsm/mdp.hpp"

namespace gbsm {

enum class ExperimentKind { transfer, vfa, ssa_agg, ssa_est, practical, properties };

ExperimentKind experiment_kind_from_name(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::transfer;
    int trials = 100;
    std::vector<double> gammas{0.1, 0.5, 0.9};
    GarnetConfig garnet;       // template; gamma and seed are overwritten per trial
    double noise_std = 0.1;    // ssa_est Gaussian variant
    int sample_k = 0;          // > 0: ssa_est sampled variant / practical tuples per (s,a)
    double agg_fraction = 0.5; // vfa and ssa_agg representative fraction
    std::uint64_t seed = 0;
    std::string output_path;
    double tol = 1e-6;
};

void validate_experiment_config(const ExperimentConfig& cfg);

/// Deterministic child seed for (master seed, gamma index, trial index); the campaign
/// result is independent of trial execution order.
std::uint64_t child_seed(std::uint64_t master, int gamma_index, int trial_index);

struct BoundStats {
    int contained = 0;
    int total = 0;
    double tightness_sum = 0.0;  // sum of bound / ground_truth over usable trials
    int tightness_count = 0;
};

struct CampaignSummary {
    std::vector<BoundReport> reports;
    std::map<std::string, BoundStats> per_bound;
    std::vector<std::string> failures;  // "gamma=..,trial=..: message"
    std::string csv_path;

    std::string text() const;
};

/// Runs trials x gammas of the configured experiment, writes the BoundReport CSV to
/// cfg.output_path (failed trials become rows of NaNs), and returns the summary.
CampaignSummary run_campaign(const ExperimentConfig& cfg);

} // namespace gbsm
