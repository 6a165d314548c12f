// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/decision.hpp"

#include <random>

#include "fdrsma/constraints.hpp"

namespace fdrsma {

Scenario scenario_from_string(const std::string& s) {
    if (s == "1" || s == "ue-side") return Scenario::UeSide;
    if (s == "2" || s == "bs-side") return Scenario::BsSide;
    if (s == "3" || s == "both-sides") return Scenario::BothSides;
    if (s == "fpa" || s == "fpa-baseline" || s == "4") return Scenario::Fpa;
    throw std::invalid_argument("unknown scenario: " + s);
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::UeSide: return "1";
        case Scenario::BsSide: return "2";
        case Scenario::BothSides: return "3";
        case Scenario::Fpa: return "fpa";
    }
    return "?";
}

MobilityMask mask_for(Scenario s) {
    switch (s) {
        case Scenario::UeSide: return {false, false, true, true};
        case Scenario::BsSide: return {true, true, false, false};
        case Scenario::BothSides: return {true, true, true, true};
        case Scenario::Fpa: return {false, false, false, false};
    }
    return {};
}

std::vector<Position2D> default_array(int n, double wavelength) {
    std::vector<Position2D> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = {(i - (n - 1) / 2.0) * wavelength / 2.0, 0.0};
    return pos;
}

DecisionVariables init_decision(const SystemConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_cvec = [&](int n) {
        std::vector<Cx<double>> v(n);
        for (auto& e : v) e = {gauss(rng), gauss(rng)};
        return v;
    };

    DecisionVariables v;
    v.w_common = random_cvec(cfg.n_t);
    for (int d = 0; d < cfg.n_dl; ++d) v.w_private.push_back(random_cvec(cfg.n_t));
    project_bs_beamformer(v.w_common, v.w_private, cfg.bs_power_w);

    for (int s = 0; s < cfg.n_streams(); ++s) {
        auto z = random_cvec(cfg.n_r);
        double scale = 1.0 / std::sqrt(norm2(z));
        for (auto& e : z) e = e * scale;
        v.z.push_back(z);
    }

    // Uniform split of half the budget: sub-powers for split users, a single
    // power for the unsplit one.
    v.p.assign(cfg.n_streams(), 0.25 * cfg.ue_power_w);
    v.p[cfg.unsplit_stream()] = 0.5 * cfg.ue_power_w;

    v.c.assign(cfg.n_dl, 0.0);

    v.t_bs = default_array(cfg.n_t, cfg.wavelength);
    v.r_bs = default_array(cfg.n_r, cfg.wavelength);
    v.t_ul.assign(cfg.n_ul, {0.0, 0.0});
    v.r_dl.assign(cfg.n_dl, {0.0, 0.0});
    return v;
}

namespace {

void push_cvec(std::vector<double>& flat, const std::vector<Cx<double>>& v) {
    for (const auto& e : v) {
        flat.push_back(e.re);
        flat.push_back(e.im);
    }
}

void pull_cvec(std::vector<Cx<double>>& v, const std::vector<double>& flat, size_t& i) {
    for (auto& e : v) {
        e.re = flat[i++];
        e.im = flat[i++];
    }
}

void push_positions(std::vector<double>& flat, const std::vector<Position2D>& pos) {
    for (const auto& p : pos) {
        flat.push_back(p.x);
        flat.push_back(p.y);
    }
}

void pull_positions(std::vector<Position2D>& pos, const std::vector<double>& flat, size_t& i) {
    for (auto& p : pos) {
        p.x = flat[i++];
        p.y = flat[i++];
    }
}

} // namespace

std::vector<double> get_block(const DecisionVariables& v, Block b, const MobilityMask& mask) {
    std::vector<double> flat;
    switch (b) {
        case Block::P: return v.p;
        case Block::C: return v.c;
        case Block::W:
            push_cvec(flat, v.w_common);
            for (const auto& wp : v.w_private) push_cvec(flat, wp);
            return flat;
        case Block::Z:
            for (const auto& z : v.z) push_cvec(flat, z);
            return flat;
        case Block::U:
            if (mask.bs_t) push_positions(flat, v.t_bs);
            if (mask.bs_r) push_positions(flat, v.r_bs);
            if (mask.ue_ul) push_positions(flat, v.t_ul);
            if (mask.ue_dl) push_positions(flat, v.r_dl);
            return flat;
    }
    return flat;
}

void set_block(DecisionVariables& v, Block b, const MobilityMask& mask,
               const std::vector<double>& flat) {
    size_t i = 0;
    switch (b) {
        case Block::P: v.p = flat; return;
        case Block::C: v.c = flat; return;
        case Block::W:
            pull_cvec(v.w_common, flat, i);
            for (auto& wp : v.w_private) pull_cvec(wp, flat, i);
            return;
        case Block::Z:
            for (auto& z : v.z) pull_cvec(z, flat, i);
            return;
        case Block::U:
            if (mask.bs_t) pull_positions(v.t_bs, flat, i);
            if (mask.bs_r) pull_positions(v.r_bs, flat, i);
            if (mask.ue_ul) pull_positions(v.t_ul, flat, i);
            if (mask.ue_dl) pull_positions(v.r_dl, flat, i);
            return;
    }
}

int block_dim(const SystemConfig& cfg, Block b, const MobilityMask& mask) {
    switch (b) {
        case Block::P: return cfg.n_streams();
        case Block::W: return 2 * (cfg.n_dl + 1) * cfg.n_t;
        case Block::Z: return 2 * cfg.n_streams() * cfg.n_r;
        case Block::C: return cfg.n_dl;
        case Block::U: return 2 * mask.movable_antennas(cfg);
    }
    return 0;
}

} // namespace fdrsma
