// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrsma/channel.hpp"
#include "fdrsma/config.hpp"
#include "fdrsma/cx.hpp"

namespace fdrsma {

enum class Scenario { UeSide = 1, BsSide = 2, BothSides = 3, Fpa = 4 };

Scenario scenario_from_string(const std::string& s);
std::string scenario_name(Scenario s);

/// Which position groups the optimizer may move.
struct MobilityMask {
    bool bs_t = false, bs_r = false, ue_ul = false, ue_dl = false;
    int movable_antennas(const SystemConfig& cfg) const {
        return (bs_t ? cfg.n_t : 0) + (bs_r ? cfg.n_r : 0) + (ue_ul ? cfg.n_ul : 0) +
               (ue_dl ? cfg.n_dl : 0);
    }
};

MobilityMask mask_for(Scenario s);

/// Full optimization state over a generic scalar. Positions are local
/// offsets within each antenna's [-A,A]^2 region.
template <class S>
struct Decision {
    std::vector<Cx<S>> w_common;                // N_T
    std::vector<std::vector<Cx<S>>> w_private;  // D x N_T
    std::vector<std::vector<Cx<S>>> z;          // n_streams x N_R
    std::vector<S> p;                           // n_streams, watts
    std::vector<S> c;                           // D, common-rate shares
    std::vector<Vec2<S>> t_bs;                  // N_T
    std::vector<Vec2<S>> r_bs;                  // N_R
    std::vector<Vec2<S>> t_ul;                  // U
    std::vector<Vec2<S>> r_dl;                  // D
};

using DecisionVariables = Decision<double>;

/// Static antenna layout used for fixed groups: half-wavelength line along x.
std::vector<Position2D> default_array(int n, double wavelength);

/// Feasible-by-construction starting point: beamformers random then scaled to
/// the BS budget, combiners random then unit-normalized, powers at half the
/// UE budgets, zero common shares, BS antennas on the default array, UE
/// antennas at their region centers.
DecisionVariables init_decision(const SystemConfig& cfg, std::uint64_t seed);

/// Flattened real blocks (complex entries interleaved re/im). The position
/// block covers only movable groups, in t_bs, r_bs, t_ul, r_dl order.
enum class Block { P, W, Z, C, U };

std::vector<double> get_block(const DecisionVariables& v, Block b, const MobilityMask& mask);
void set_block(DecisionVariables& v, Block b, const MobilityMask& mask,
               const std::vector<double>& flat);
int block_dim(const SystemConfig& cfg, Block b, const MobilityMask& mask);

/// All four channel types assembled at the decision's antenna positions.
template <class S>
struct Channels {
    std::vector<std::vector<Cx<S>>> dl; // D x N_T
    std::vector<std::vector<Cx<S>>> ul; // U x N_R
    std::vector<std::vector<Cx<S>>> si; // N_T x N_R (H_SI)
    std::vector<std::vector<Cx<S>>> x;  // U x D scalars
};

template <class S>
Channels<S> assemble_channels(const Instance& inst, const Decision<S>& v, const SystemConfig& cfg) {
    Channels<S> ch;
    ch.dl.reserve(inst.dl_paths.size());
    for (size_t d = 0; d < inst.dl_paths.size(); ++d)
        ch.dl.push_back(assemble_dl_channel(v.t_bs, v.r_dl[d], inst.dl_paths[d], cfg.wavelength));
    ch.ul.reserve(inst.ul_paths.size());
    for (size_t u = 0; u < inst.ul_paths.size(); ++u)
        ch.ul.push_back(assemble_ul_channel(v.t_ul[u], v.r_bs, inst.ul_paths[u], cfg.wavelength));
    ch.si = assemble_si_channel(v.t_bs, v.r_bs, inst.si_paths, cfg.wavelength);
    ch.x.resize(inst.ul_paths.size());
    for (size_t u = 0; u < inst.ul_paths.size(); ++u) {
        ch.x[u].reserve(inst.dl_paths.size());
        for (size_t d = 0; d < inst.dl_paths.size(); ++d)
            ch.x[u].push_back(
                assemble_xlink_channel(v.t_ul[u], v.r_dl[d], inst.xlink_paths[u][d], cfg.wavelength));
    }
    return ch;
}

} // namespace fdrsma
