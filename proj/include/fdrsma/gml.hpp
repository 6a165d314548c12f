// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrsma/gradient.hpp"
#include "fdrsma/mlp.hpp"

namespace fdrsma {

struct GmlHyperParams {
    int n_inner = 5;
    int n_outer = 2;
    int n_epochs = 300;
    double gamma = 0.001; // MA step regulator amplitude, meters (0.1 wavelength)
    PenaltyWeights weights{};
    double lr_p = 1e-3, lr_w = 1e-3, lr_z = 1e-3, lr_c = 1e-3, lr_u = 1e-3;
    int hidden = 200;
    Scenario scenario = Scenario::BothSides;

    void validate() const;
};

/// Table-default hyperparameters with the regulator scaled to the wavelength.
GmlHyperParams default_hyper(const SystemConfig& cfg);

struct RunResult {
    DecisionVariables best_vars;
    double best_objective = 0.0; // sum rate at best_vars
    double best_meta = 0.0;      // -L at the best candidate
    RateReport best_report;
    FeasibilityReport best_feasibility;
    bool feasible = false;

    std::vector<double> epoch_mean_loss;  // averaged L-bar per epoch
    std::vector<double> outer_best_trace; // running best objective after each outer iteration
    std::vector<double> per_epoch_best;   // epoch-local max of -L (Algorithm-1-style reset)

    double seconds = 0.0;
    std::uint64_t seed = 0;
    int epochs_run = 0;

    // Safety instrumentation, updated at every inner position step.
    double max_abs_coord = 0.0;
    double max_step_increment = 0.0;

    bool aborted = false;
    std::string diagnostic;
};

/// Runs the full nested-loop meta-learning optimizer on one instance.
/// Deterministic for a fixed (config, instance, hyper, seed).
RunResult run_gml(const SystemConfig& cfg, const Instance& inst, const GmlHyperParams& hyper,
                  std::uint64_t seed);

/// Multi-start projected gradient descent on the same penalized loss, with a
/// backtracking step size. Comparison baseline for the meta-learner.
RunResult reference_optimizer(const Instance& inst, const SystemConfig& cfg, int n_starts,
                              Scenario scenario = Scenario::BothSides, int max_iters = 300,
                              std::uint64_t seed = 1);

} // namespace fdrsma
