// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/channel.hpp"

#include <cmath>
#include <random>

namespace fdrsma {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

PathSet sample_path_set(std::mt19937_64& rng, int paths, double variance_per_path) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance_per_path / 2.0));
    PathSet ps;
    ps.theta_t.resize(paths);
    ps.phi_t.resize(paths);
    ps.theta_r.resize(paths);
    ps.phi_r.resize(paths);
    for (int l = 0; l < paths; ++l) ps.theta_t[l] = angle(rng);
    for (int l = 0; l < paths; ++l) ps.phi_t[l] = angle(rng);
    for (int l = 0; l < paths; ++l) ps.theta_r[l] = angle(rng);
    for (int l = 0; l < paths; ++l) ps.phi_r[l] = angle(rng);
    ps.prm.assign(paths, std::vector<std::complex<double>>(paths, 0.0));
    for (int l = 0; l < paths; ++l) {
        double re = gauss(rng);
        double im = gauss(rng);
        ps.prm[l][l] = {re, im};
    }
    return ps;
}

double distance_from_origin(const Position2D& p) { return std::hypot(p.x, p.y); }

double distance_between(const Position2D& a, const Position2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace

Instance sample_instance(const SystemConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> place(-cfg.cell_size / 2.0, cfg.cell_size / 2.0);
    const int L = cfg.n_paths;

    Instance inst;
    inst.dl_placements.resize(cfg.n_dl);
    inst.ul_placements.resize(cfg.n_ul);
    for (auto& p : inst.dl_placements) p = {place(rng), place(rng)};
    for (auto& p : inst.ul_placements) p = {place(rng), place(rng)};

    for (int d = 0; d < cfg.n_dl; ++d) {
        LinkBudget b;
        b.g0 = cfg.g0;
        b.alpha = cfg.alpha;
        b.distance = distance_from_origin(inst.dl_placements[d]);
        b.variance_per_path = b.g0 * std::pow(b.distance, -b.alpha) / L;
        inst.dl_budgets.push_back(b);
        inst.dl_paths.push_back(sample_path_set(rng, L, b.variance_per_path));
    }
    for (int u = 0; u < cfg.n_ul; ++u) {
        LinkBudget b;
        b.g0 = cfg.g0;
        b.alpha = cfg.alpha;
        b.distance = distance_from_origin(inst.ul_placements[u]);
        b.variance_per_path = b.g0 * std::pow(b.distance, -b.alpha) / L;
        inst.ul_budgets.push_back(b);
        inst.ul_paths.push_back(sample_path_set(rng, L, b.variance_per_path));
    }
    {
        LinkBudget b;
        b.g0 = cfg.si_gain;
        b.alpha = 0.0;
        b.distance = 0.0;
        b.variance_per_path = cfg.si_gain / L;
        inst.si_budget = b;
        inst.si_paths = sample_path_set(rng, L, b.variance_per_path);
    }
    inst.xlink_paths.resize(cfg.n_ul);
    inst.xlink_budgets.resize(cfg.n_ul);
    for (int u = 0; u < cfg.n_ul; ++u) {
        for (int d = 0; d < cfg.n_dl; ++d) {
            LinkBudget b;
            b.g0 = cfg.g01;
            b.alpha = cfg.alpha1;
            b.distance = distance_between(inst.ul_placements[u], inst.dl_placements[d]);
            b.variance_per_path = b.g0 * std::pow(b.distance, -b.alpha) / L;
            inst.xlink_budgets[u].push_back(b);
            inst.xlink_paths[u].push_back(sample_path_set(rng, L, b.variance_per_path));
        }
    }
    return inst;
}

void rescale_si(Instance& inst, double sampled_si_linear, double si_linear) {
    double scale = std::sqrt(si_linear / sampled_si_linear);
    for (auto& row : inst.si_paths.prm)
        for (auto& v : row) v *= scale;
    inst.si_budget.g0 = si_linear;
    inst.si_budget.variance_per_path *= si_linear / sampled_si_linear;
}

} // namespace fdrsma
