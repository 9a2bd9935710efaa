#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbsm/errors.hpp"
#include "gbsm/experiments.hpp"
#include "gbsm/io.hpp"
#include "gbsm/metric.hpp"
#include "gbsm/practical.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitIo = 3;

struct Options {
    // shared
    std::uint64_t seed = 0;
    double tol = 1e-6;
    std::string out;
    // garnet-gen / experiment
    int states = 20;
    int actions = 5;
    double branching = 0.5;
    std::vector<double> gammas;
    // experiment
    std::string experiment_name;
    int trials = 100;
    double noise_std = 0.1;
    int sample_k = 0;
    double agg_fraction = 0.5;
    // gbsm-practical
    int eta1 = 10;
    double eta2 = 1e-4;
    // positionals
    std::vector<std::string> inputs;
};

double single_gamma(const Options& opt, double fallback) {
    if (opt.gammas.size() > 1)
        throw gbsm::InvalidParameter("this subcommand takes a single --gamma");
    return opt.gammas.empty() ? fallback : opt.gammas.front();
}

int cmd_garnet_gen(const Options& opt) {
    gbsm::GarnetConfig cfg;
    cfg.num_states = opt.states;
    cfg.num_actions = opt.actions;
    cfg.branching_fraction = opt.branching;
    cfg.gamma = single_gamma(opt, 0.9);
    cfg.seed = opt.seed;
    gbsm::save_mdp(gbsm::garnet_generate(cfg), opt.out);
    std::cout << "wrote " << opt.out << "\n";
    return kExitOk;
}

int cmd_gbsm(const Options& opt, bool single_mdp) {
    gbsm::FixedPointConfig cfg;
    cfg.tol = opt.tol;
    const gbsm::Mdp m1 = gbsm::load_mdp(opt.inputs.front());
    const gbsm::MetricMatrix d =
        single_mdp ? gbsm::bsm(m1, cfg) : gbsm::gbsm(m1, gbsm::load_mdp(opt.inputs.back()), cfg);
    gbsm::save_metric(d, opt.out);
    std::cout << "iterations=" << d.iterations << " residual=" << d.residual
              << " max=" << d.max_entry() << " -> " << opt.out << "\n";
    return kExitOk;
}

int cmd_practical(const Options& opt) {
    const gbsm::Dataset data = gbsm::load_dataset(opt.inputs.front());
    const gbsm::Mdp source = gbsm::load_mdp(opt.inputs.back());
    gbsm::PracticalConfig cfg;
    cfg.eta1 = opt.eta1;
    cfg.eta2 = opt.eta2;
    gbsm::StageReport stage;
    const gbsm::MetricMatrix d = gbsm::compute_gbsm_practical(data, source, cfg, &stage);
    gbsm::save_metric(d, opt.out);
    std::cout << "target_states=" << stage.target_states
              << " source_states=" << stage.source_states
              << " dropped_tuples=" << stage.dropped_tuples
              << " max_dropped_mass=" << stage.max_dropped_mass << " -> " << opt.out << "\n";
    return kExitOk;
}

int cmd_experiment(const Options& opt) {
    gbsm::ExperimentConfig cfg;
    cfg.experiment = gbsm::experiment_kind_from_name(opt.experiment_name);
    cfg.trials = opt.trials;
    if (!opt.gammas.empty()) cfg.gammas = opt.gammas;
    cfg.garnet.num_states = opt.states;
    cfg.garnet.num_actions = opt.actions;
    cfg.garnet.branching_fraction = opt.branching;
    cfg.noise_std = opt.noise_std;
    cfg.sample_k = opt.sample_k;
    cfg.agg_fraction = opt.agg_fraction;
    cfg.seed = opt.seed;
    cfg.output_path = opt.out;
    cfg.tol = opt.tol;
    const gbsm::CampaignSummary summary = gbsm::run_campaign(cfg);
    std::cout << summary.text();
    return summary.failures.empty() ? kExitOk : kExitComputation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bisimulation-style state-similarity metrics for finite MDPs"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "random seed");
        sub->add_option("--tol", opt.tol, "fixed-point convergence tolerance");
    };

    CLI::App* gen = app.add_subcommand("garnet-gen", "generate a random Garnet MDP as JSON");
    add_common(gen);
    gen->add_option("--states", opt.states, "number of states");
    gen->add_option("--actions", opt.actions, "number of actions");
    gen->add_option("--branching", opt.branching, "branching fraction in (0, 1]");
    gen->add_option("--gamma", opt.gammas, "discount factor");
    gen->add_option("--out", opt.out, "output MDP JSON path")->required();

    CLI::App* pair = app.add_subcommand("gbsm", "metric between two MDPs");
    add_common(pair);
    pair->add_option("mdps", opt.inputs, "two MDP JSON files")->expected(2)->required();
    pair->add_option("--out", opt.out, "output metric JSON path")->required();

    CLI::App* self = app.add_subcommand("bsm", "classic single-MDP bisimulation metric");
    add_common(self);
    self->add_option("mdp", opt.inputs, "MDP JSON file")->expected(1)->required();
    self->add_option("--out", opt.out, "output metric JSON path")->required();

    CLI::App* practical = app.add_subcommand(
        "gbsm-practical", "dataset-driven metric against a known source MDP");
    add_common(practical);
    practical->add_option("inputs", opt.inputs, "dataset CSV then source MDP JSON")
        ->expected(2)
        ->required();
    practical->add_option("--eta1", opt.eta1, "minimum samples per (state, action)");
    practical->add_option("--eta2", opt.eta2, "convergence threshold");
    practical->add_option("--out", opt.out, "output metric JSON path")->required();

    CLI::App* exp = app.add_subcommand("experiment", "run a seeded campaign, write CSV");
    add_common(exp);
    exp->add_option("name", opt.experiment_name,
                    "transfer | vfa | ssa_agg | ssa_est | practical | properties")
        ->required();
    exp->add_option("--trials", opt.trials, "trials per gamma");
    exp->add_option("--gamma", opt.gammas, "discount factor (repeatable)");
    exp->add_option("--states", opt.states, "number of states");
    exp->add_option("--actions", opt.actions, "number of actions");
    exp->add_option("--branching", opt.branching, "branching fraction in (0, 1]");
    exp->add_option("--noise-std", opt.noise_std, "Gaussian perturbation scale");
    exp->add_option("--sample-k", opt.sample_k, "samples per (state, action)");
    exp->add_option("--agg-fraction", opt.agg_fraction, "representative-state fraction");
    exp->add_option("--out", opt.out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_garnet_gen(opt);
        if (pair->parsed()) return cmd_gbsm(opt, /*single_mdp=*/false);
        if (self->parsed()) return cmd_gbsm(opt, /*single_mdp=*/true);
        if (practical->parsed()) return cmd_practical(opt);
        if (exp->parsed()) return cmd_experiment(opt);
    } catch (const gbsm::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const gbsm::InvalidParameter& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const gbsm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}
