// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/gml.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace fdrsma {

void GmlHyperParams::validate() const {
    if (n_inner < 1 || n_outer < 1 || n_epochs < 1)
        throw std::invalid_argument("GML iteration counts must be >= 1");
    if (gamma <= 0.0) throw std::invalid_argument("GML regulator gamma must be > 0");
    if (hidden < 1) throw std::invalid_argument("GML hidden width must be >= 1");
}

GmlHyperParams default_hyper(const SystemConfig& cfg) {
    GmlHyperParams h;
    h.gamma = 0.1 * cfg.wavelength;
    return h;
}

namespace {

constexpr Block kBlockOrder[] = {Block::P, Block::W, Block::Z, Block::C, Block::U};

int block_index(Block b) { return static_cast<int>(b); }

struct Candidate {
    DecisionVariables vars;
    MetaLossBreakdown terms{};
};

/// Applies a block increment with the block-specific safeguards: powers stay
/// nonnegative, common shares stay nonnegative, positions pass through the
/// step regulator and region clamp.
void apply_step(DecisionVariables& vars, Block b, const MobilityMask& mask,
                const std::vector<double>& delta_raw, const SystemConfig& cfg, double gamma,
                RunResult& diag) {
    std::vector<double> flat = get_block(vars, b, mask);
    if (b == Block::U) {
        for (size_t i = 0; i < flat.size(); ++i) {
            double step = regulate_ma_step(delta_raw[i], gamma);
            diag.max_step_increment = std::max(diag.max_step_increment, std::abs(step));
            flat[i] = std::clamp(flat[i] + step, -cfg.region_half, cfg.region_half);
            diag.max_abs_coord = std::max(diag.max_abs_coord, std::abs(flat[i]));
        }
    } else {
        for (size_t i = 0; i < flat.size(); ++i) flat[i] += delta_raw[i];
        if (b == Block::P || b == Block::C)
            for (auto& x : flat) x = std::max(x, 0.0);
    }
    set_block(vars, b, mask, flat);
}

void apply_post_cycle_projection(DecisionVariables& vars, Block b, const SystemConfig& cfg) {
    if (b == Block::P) vars.p = project_ue_power(vars.p, cfg);
    if (b == Block::W)
        project_bs_beamformer(vars.w_common, vars.w_private, cfg.bs_power_w,
                              cfg.project_only_if_exceeded);
}

/// Uplink rates are invariant to a positive rescaling of each combiner (the
/// noise term carries the combiner norm), so the returned solution can be
/// normalized to satisfy the unit-norm constraint without changing any rate.
void normalize_combiners(DecisionVariables& vars) {
    for (auto& z : vars.z) {
        double n = 0.0;
        for (const auto& e : z) n += abs2(e);
        n = std::sqrt(n);
        if (n > 0.0)
            for (auto& e : z) e = e * (1.0 / n);
    }
}

} // namespace

RunResult run_gml(const SystemConfig& cfg, const Instance& inst, const GmlHyperParams& hyper,
                  std::uint64_t seed) {
    hyper.validate();
    auto t0 = std::chrono::steady_clock::now();

    const MobilityMask mask = mask_for(hyper.scenario);
    const bool has_moan = mask.movable_antennas(cfg) > 0;

    RunResult res;
    res.seed = seed;

    const DecisionVariables vars0 = init_decision(cfg, seed);

    Mlp nets[5];
    AdamState adams[5];
    const double lrs[5] = {hyper.lr_p, hyper.lr_w, hyper.lr_z, hyper.lr_c, hyper.lr_u};
    for (Block b : kBlockOrder) {
        int k = block_index(b);
        if (b == Block::U && !has_moan) continue;
        int dim = block_dim(cfg, b, mask);
        nets[k] = Mlp(dim, hyper.hidden, dim, seed ^ (0x9e3779b97f4a7c15ull * (k + 1)));
        adams[k] = AdamState(nets[k].n_params(), lrs[k]);
    }

    double best_meta = -std::numeric_limits<double>::infinity();
    Candidate best{vars0, {}};
    bool have_best = false;

    for (int epoch = 0; epoch < hyper.n_epochs; ++epoch) {
        double loss_acc = 0.0;
        int loss_count = 0;
        double epoch_best = -std::numeric_limits<double>::infinity();
        std::vector<double> pgrad[5];
        for (Block b : kBlockOrder) {
            int k = block_index(b);
            if (b == Block::U && !has_moan) continue;
            pgrad[k].assign(nets[k].n_params(), 0.0);
        }

        for (int outer = 0; outer < hyper.n_outer; ++outer) {
            DecisionVariables vars = vars0;
            std::vector<std::vector<double>> xs[5], raws[5];
            bool bad = false;

            for (Block b : kBlockOrder) {
                if (b == Block::U && !has_moan) continue;
                int k = block_index(b);
                for (int i = 0; i < hyper.n_inner; ++i) {
                    BlockGrads g = meta_loss_grad(inst, vars, mask, cfg, hyper.weights);
                    if (!g.finite) {
                        res.diagnostic = "non-finite loss graph at tape node " +
                                         std::to_string(g.bad_node) + " (epoch " +
                                         std::to_string(epoch) + ")";
                        bad = true;
                        break;
                    }
                    std::vector<double> x = g.block(b);
                    if (b == Block::U) {
                        // Position gradients carry the 2*pi/lambda phase
                        // sensitivity (magnitudes in the 1e3 range), which
                        // saturates the regulator's tanh from the first
                        // forward pass. RMS-normalizing the network input
                        // keeps the direction information and leaves the
                        // magnitude to the learned parameters.
                        double rms = 0.0;
                        for (double v : x) rms += v * v;
                        rms = std::sqrt(rms / x.size()) + 1e-12;
                        for (double& v : x) v /= rms;
                    }
                    xs[k].push_back(std::move(x));
                    raws[k].push_back(nets[k].forward(xs[k].back()));
                    apply_step(vars, b, mask, raws[k].back(), cfg, hyper.gamma, res);
                }
                if (bad) break;
                apply_post_cycle_projection(vars, b, cfg);
            }
            if (bad) {
                res.aborted = true;
                res.outer_best_trace.push_back(best_meta);
                continue;
            }

            BlockGrads fin = meta_loss_grad(inst, vars, mask, cfg, hyper.weights);
            if (!fin.finite) {
                res.aborted = true;
                res.diagnostic = "non-finite loss at outer candidate";
                res.outer_best_trace.push_back(best_meta);
                continue;
            }
            loss_acc += fin.terms.total;
            ++loss_count;
            epoch_best = std::max(epoch_best, -fin.terms.total);
            if (-fin.terms.total > best_meta) {
                best_meta = -fin.terms.total;
                best = {vars, fin.terms};
                have_best = true;
            }
            res.outer_best_trace.push_back(best_meta);

            // Truncated backprop, one step deep: the candidate loss reaches a
            // network through each increment it emitted along this outer
            // iteration, so every repetition contributes param_grads with the
            // candidate-point block gradient as upstream (the position block
            // additionally chains through the regulator's tanh derivative).
            for (Block b : kBlockOrder) {
                if (b == Block::U && !has_moan) continue;
                int k = block_index(b);
                const std::vector<double> fin_up = fin.block(b);
                for (size_t rep = 0; rep < xs[k].size(); ++rep) {
                    std::vector<double> upstream = fin_up;
                    if (b == Block::U) {
                        for (size_t i = 0; i < upstream.size(); ++i) {
                            double th = std::tanh(raws[k][rep][i]);
                            upstream[i] *= hyper.gamma * (1.0 - th * th);
                        }
                    }
                    std::vector<double> pg = nets[k].param_grads(xs[k][rep], upstream);
                    for (size_t i = 0; i < pg.size(); ++i) pgrad[k][i] += pg[i];
                }
            }
        }

        res.epoch_mean_loss.push_back(loss_count > 0 ? loss_acc / loss_count : 0.0);
        res.per_epoch_best.push_back(epoch_best);
        if (loss_count > 0) {
            for (Block b : kBlockOrder) {
                int k = block_index(b);
                if (b == Block::U && !has_moan) continue;
                for (auto& gval : pgrad[k]) gval /= loss_count;
                adams[k].update(nets[k].params(), pgrad[k]);
            }
        }
        res.epochs_run = epoch + 1;
    }

    if (!have_best) best.terms = meta_loss(inst, best.vars, cfg, hyper.weights);
    res.best_vars = best.vars;
    normalize_combiners(res.best_vars);
    res.best_meta = -best.terms.total;
    auto [sum, report] = sum_rate_objective(inst, res.best_vars, cfg);
    res.best_objective = sum;
    res.best_report = report;
    res.best_feasibility = feasibility_report(inst, res.best_vars, mask, cfg);
    res.feasible = res.best_feasibility.all_satisfied();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

RunResult reference_optimizer(const Instance& inst, const SystemConfig& cfg, int n_starts,
                              Scenario scenario, int max_iters, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    const MobilityMask mask = mask_for(scenario);

    RunResult res;
    res.seed = seed;
    double best_meta = -std::numeric_limits<double>::infinity();
    DecisionVariables best_vars = init_decision(cfg, seed);

    for (int start = 0; start < n_starts; ++start) {
        DecisionVariables vars = init_decision(cfg, seed + 1000003ull * start);
        double eta = 0.05;
        MetaLossBreakdown cur = meta_loss(inst, vars, cfg, PenaltyWeights{});
        if (-cur.total > best_meta) {
            best_meta = -cur.total;
            best_vars = vars;
        }
        for (int it = 0; it < max_iters && eta > 1e-10; ++it) {
            BlockGrads g = meta_loss_grad(inst, vars, mask, cfg, PenaltyWeights{});
            if (!g.finite) break;
            DecisionVariables trial = vars;
            for (Block b : kBlockOrder) {
                const std::vector<double>& gb = g.block(b);
                if (gb.empty()) continue;
                double norm = 0.0;
                for (double x : gb) norm += x * x;
                norm = std::sqrt(norm) + 1e-12;
                std::vector<double> flat = get_block(trial, b, mask);
                double scale = (b == Block::U) ? std::min(eta, 0.2 * cfg.region_half) : eta;
                for (size_t i = 0; i < flat.size(); ++i) flat[i] -= scale * gb[i] / norm;
                if (b == Block::P || b == Block::C)
                    for (auto& x : flat) x = std::max(x, 0.0);
                set_block(trial, b, mask, flat);
                if (b == Block::U) {
                    for (auto& p : trial.t_bs) p = clip_to_region(p, cfg.region_half);
                    for (auto& p : trial.r_bs) p = clip_to_region(p, cfg.region_half);
                    for (auto& p : trial.t_ul) p = clip_to_region(p, cfg.region_half);
                    for (auto& p : trial.r_dl) p = clip_to_region(p, cfg.region_half);
                }
            }
            trial.p = project_ue_power(trial.p, cfg);
            project_bs_beamformer(trial.w_common, trial.w_private, cfg.bs_power_w,
                                  cfg.project_only_if_exceeded);
            MetaLossBreakdown t = meta_loss(inst, trial, cfg, PenaltyWeights{});
            if (t.total < cur.total) {
                vars = trial;
                cur = t;
                eta *= 1.2;
                if (-cur.total > best_meta) {
                    best_meta = -cur.total;
                    best_vars = vars;
                }
            } else {
                eta *= 0.5;
            }
        }
        res.outer_best_trace.push_back(best_meta);
    }

    res.best_vars = best_vars;
    normalize_combiners(res.best_vars);
    res.best_meta = best_meta;
    auto [sum, report] = sum_rate_objective(inst, res.best_vars, cfg);
    res.best_objective = sum;
    res.best_report = report;
    res.best_feasibility = feasibility_report(inst, res.best_vars, mask, cfg);
    res.feasible = res.best_feasibility.all_satisfied();
    res.epochs_run = max_iters;
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

} // namespace fdrsma
