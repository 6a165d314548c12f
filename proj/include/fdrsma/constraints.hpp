// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdrsma/rates.hpp"

namespace fdrsma {

struct PenaltyWeights {
    double rho1 = 10.0; // QoS thresholds
    double rho2 = 10.0; // combiner norms
    double rho3 = 10.0; // common-rate split
    double rho4 = 10.0; // inter-MA distance
};

/// The five terms of the penalized loss. total = -rate + the four penalties.
template <class S>
struct MetaLossTerms {
    S rate, threshold, norm, common, ma_dist, total;
};

using MetaLossBreakdown = MetaLossTerms<double>;

/// Rescales each UL UE's stream powers onto its budget, preserving the
/// within-UE split. Already-feasible entries pass through unchanged.
std::vector<double> project_ue_power(const std::vector<double>& p,
                                     const SystemConfig& cfg);

/// Rescales the stacked beamformers (W_c then W_{p,d}) so the total trace
/// power equals the BS budget. With project_only_if_exceeded the rescale
/// happens only above budget. Zero input is returned unchanged; *degenerate
/// is set when provided.
void project_bs_beamformer(std::vector<Cx<double>>& w_common,
                           std::vector<std::vector<Cx<double>>>& w_private, double p_bs,
                           bool only_if_exceeded = false, bool* degenerate = nullptr);

/// MOAN step regulator: componentwise gamma * tanh(delta).
double regulate_ma_step(double delta, double gamma);
std::vector<double> regulate_ma_step(const std::vector<double>& delta, double gamma);

/// Componentwise clamp into [-A, A]. Idempotent.
Position2D clip_to_region(const Position2D& p, double region_half);

namespace detail {

template <class S>
S pair_distance(const Vec2<S>& a, const Vec2<S>& b) {
    using std::sqrt;
    S dx = a.x - b.x;
    S dy = a.y - b.y;
    // tiny floor keeps the sqrt differentiable if two antennas coincide
    return sqrt(dx * dx + dy * dy + 1e-30);
}

template <class S>
S min_distance_penalty(const std::vector<Vec2<S>>& pos, double min_dist) {
    S acc = pos[0].x * 0.0;
    for (size_t i = 0; i < pos.size(); ++i)
        for (size_t j = i + 1; j < pos.size(); ++j)
            acc = acc + max0(min_dist - pair_distance(pos[i], pos[j]));
    return acc;
}

} // namespace detail

/// Penalized loss: negative sum rate plus hinge penalties for the QoS,
/// combiner-norm, common-split, and inter-MA-distance constraints. Each
/// penalty is exactly zero on the feasible set.
template <class S>
MetaLossTerms<S> meta_loss(const Instance& inst, const Decision<S>& v, const SystemConfig& cfg,
                           const PenaltyWeights& w) {
    using std::sqrt;
    auto ch = assemble_channels(inst, v, cfg);
    auto r = compute_rates(ch, v, cfg);
    MetaLossTerms<S> out;
    out.rate = r.sum;

    S thr = max0(cfg.dl_rate_threshold - r.r_dl_total[0]);
    for (int d = 1; d < cfg.n_dl; ++d) thr = thr + max0(cfg.dl_rate_threshold - r.r_dl_total[d]);
    for (int u = 0; u < cfg.n_ul; ++u) thr = thr + max0(cfg.ul_rate_threshold - r.r_ul_user[u]);
    out.threshold = thr * w.rho1;

    S nrm = vabs(sqrt(norm2(v.z[0]) + 1e-30) - 1.0);
    for (int s = 1; s < cfg.n_streams(); ++s)
        nrm = nrm + vabs(sqrt(norm2(v.z[s]) + 1e-30) - 1.0);
    out.norm = nrm * w.rho2;

    S csum = v.c[0];
    for (int d = 1; d < cfg.n_dl; ++d) csum = csum + v.c[d];
    out.common = max0(csum - r.r_c_floor) * w.rho3;

    out.ma_dist = (detail::min_distance_penalty(v.t_bs, cfg.min_ma_dist) +
                   detail::min_distance_penalty(v.r_bs, cfg.min_ma_dist)) *
                  w.rho4;

    out.total = -out.rate + out.threshold + out.norm + out.common + out.ma_dist;
    return out;
}

/// Signed slack (nonnegative = satisfied) for every constraint of the
/// formulated problems, evaluated at tolerance kFeasTol.
struct FeasibilityReport {
    static constexpr double kFeasTol = 1e-6;

    double bs_power_slack = 0.0;
    std::vector<double> ue_power_slack;     // per UL UE budget
    double power_nonneg_slack = 0.0;        // min over stream powers
    std::vector<double> dl_rate_slack;      // R_d - R_th,d
    std::vector<double> ul_rate_slack;      // R_u - R_th,u
    std::vector<double> combiner_norm_slack; // -| ||Z_s|| - 1 | per stream
    double common_split_slack = 0.0;        // R_c - sum C_d
    double common_nonneg_slack = 0.0;       // min over C_d
    double ma_dist_slack_t = 0.0;           // min pair distance - DS, BS tx
    double ma_dist_slack_r = 0.0;           // same, BS rx
    double region_slack = 0.0;              // min over movable coords of A - |coord|

    bool all_satisfied() const;
};

FeasibilityReport feasibility_report(const Instance& inst, const DecisionVariables& v,
                                     const MobilityMask& mask, const SystemConfig& cfg);

} // namespace fdrsma
