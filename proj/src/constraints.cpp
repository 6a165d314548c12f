// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/constraints.hpp"

#include <limits>

namespace fdrsma {

std::vector<double> project_ue_power(const std::vector<double>& p, const SystemConfig& cfg) {
    for (double v : p)
        if (v < 0.0) throw std::invalid_argument("project_ue_power: negative power");
    std::vector<double> out = p;
    for (int u = 0; u < cfg.n_ul - 1; ++u) {
        double total = out[cfg.split_stream(u, 0)] + out[cfg.split_stream(u, 1)];
        if (total > cfg.ue_power_w) {
            double scale = cfg.ue_power_w / total;
            out[cfg.split_stream(u, 0)] *= scale;
            out[cfg.split_stream(u, 1)] *= scale;
        }
    }
    if (out[cfg.unsplit_stream()] > cfg.ue_power_w) out[cfg.unsplit_stream()] = cfg.ue_power_w;
    return out;
}

void project_bs_beamformer(std::vector<Cx<double>>& w_common,
                           std::vector<std::vector<Cx<double>>>& w_private, double p_bs,
                           bool only_if_exceeded, bool* degenerate) {
    double trace = norm2(w_common);
    for (const auto& wp : w_private) trace += norm2(wp);
    if (degenerate) *degenerate = false;
    if (trace == 0.0) {
        if (degenerate) *degenerate = true;
        return;
    }
    if (only_if_exceeded && trace <= p_bs) return;
    double scale = std::sqrt(p_bs / trace);
    for (auto& w : w_common) w = w * scale;
    for (auto& wp : w_private)
        for (auto& w : wp) w = w * scale;
}

double regulate_ma_step(double delta, double gamma) { return gamma * std::tanh(delta); }

std::vector<double> regulate_ma_step(const std::vector<double>& delta, double gamma) {
    std::vector<double> out(delta.size());
    for (size_t i = 0; i < delta.size(); ++i) out[i] = regulate_ma_step(delta[i], gamma);
    return out;
}

Position2D clip_to_region(const Position2D& p, double region_half) {
    return {std::clamp(p.x, -region_half, region_half),
            std::clamp(p.y, -region_half, region_half)};
}

bool FeasibilityReport::all_satisfied() const {
    auto ok = [](double slack) { return slack >= -kFeasTol; };
    if (!ok(bs_power_slack) || !ok(power_nonneg_slack) || !ok(common_split_slack) ||
        !ok(common_nonneg_slack) || !ok(ma_dist_slack_t) || !ok(ma_dist_slack_r) ||
        !ok(region_slack))
        return false;
    for (double s : ue_power_slack)
        if (!ok(s)) return false;
    for (double s : dl_rate_slack)
        if (!ok(s)) return false;
    for (double s : ul_rate_slack)
        if (!ok(s)) return false;
    for (double s : combiner_norm_slack)
        if (!ok(s)) return false;
    return true;
}

namespace {

double min_pair_distance(const std::vector<Position2D>& pos) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < pos.size(); ++i)
        for (size_t j = i + 1; j < pos.size(); ++j)
            best = std::min(best, std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y));
    return best;
}

void fold_region_slack(double& slack, const std::vector<Position2D>& pos, double a) {
    for (const auto& p : pos) {
        slack = std::min(slack, a - std::abs(p.x));
        slack = std::min(slack, a - std::abs(p.y));
    }
}

} // namespace

FeasibilityReport feasibility_report(const Instance& inst, const DecisionVariables& v,
                                     const MobilityMask& mask, const SystemConfig& cfg) {
    FeasibilityReport rep;
    auto [sum, rates] = sum_rate_objective(inst, v, cfg);
    (void)sum;

    double trace = norm2(v.w_common);
    for (const auto& wp : v.w_private) trace += norm2(wp);
    rep.bs_power_slack = cfg.bs_power_w - trace;

    for (int u = 0; u < cfg.n_ul - 1; ++u)
        rep.ue_power_slack.push_back(cfg.ue_power_w - v.p[cfg.split_stream(u, 0)] -
                                     v.p[cfg.split_stream(u, 1)]);
    rep.ue_power_slack.push_back(cfg.ue_power_w - v.p[cfg.unsplit_stream()]);
    rep.power_nonneg_slack = *std::min_element(v.p.begin(), v.p.end());

    for (int d = 0; d < cfg.n_dl; ++d)
        rep.dl_rate_slack.push_back(rates.r_dl_total[d] - cfg.dl_rate_threshold);
    for (int u = 0; u < cfg.n_ul; ++u)
        rep.ul_rate_slack.push_back(rates.r_ul_user[u] - cfg.ul_rate_threshold);

    for (int s = 0; s < cfg.n_streams(); ++s)
        rep.combiner_norm_slack.push_back(-std::abs(std::sqrt(norm2(v.z[s])) - 1.0));

    double csum = 0.0;
    double cmin = std::numeric_limits<double>::infinity();
    for (double cd : v.c) {
        csum += cd;
        cmin = std::min(cmin, cd);
    }
    rep.common_split_slack = rates.r_c_floor - csum;
    rep.common_nonneg_slack = cmin;

    rep.ma_dist_slack_t = min_pair_distance(v.t_bs) - cfg.min_ma_dist;
    rep.ma_dist_slack_r = min_pair_distance(v.r_bs) - cfg.min_ma_dist;

    rep.region_slack = std::numeric_limits<double>::infinity();
    if (mask.bs_t) fold_region_slack(rep.region_slack, v.t_bs, cfg.region_half);
    if (mask.bs_r) fold_region_slack(rep.region_slack, v.r_bs, cfg.region_half);
    if (mask.ue_ul) fold_region_slack(rep.region_slack, v.t_ul, cfg.region_half);
    if (mask.ue_dl) fold_region_slack(rep.region_slack, v.r_dl, cfg.region_half);

    (void)inst;
    return rep;
}

} // namespace fdrsma
