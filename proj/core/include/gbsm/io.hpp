#pragma once

#include <string>
#include <vector>

#include "gbsm/approximation.hpp"
#include "gbsm/bounds.hpp"
#include "gbsm/mdp.hpp"
#include "gbsm/metric.hpp"

namespace gbsm {

/// MDP JSON: {"num_states", "num_actions", "gamma", "reward_max",
/// "rewards": [[float]], "transitions": [[[float]]]}. Round-trips bit-exactly.
std::string mdp_to_json(const Mdp& m);
Mdp mdp_from_json(const std::string& text);
void save_mdp(const Mdp& m, const std::string& path);
Mdp load_mdp(const std::string& path);

/// MetricMatrix JSON: {"rows", "cols", "dist": [[float]], "iterations", "residual"}.
std::string metric_to_json(const MetricMatrix& d);
MetricMatrix metric_from_json(const std::string& text);
void save_metric(const MetricMatrix& d, const std::string& path);
MetricMatrix load_metric(const std::string& path);

/// Dataset CSV: header "s,a,s_next,r", one tuple per line.
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

/// BoundReport CSV: header from the first report, one row per trial.
void save_bound_reports(const std::vector<BoundReport>& reports, const std::string& path);

} // namespace gbsm
