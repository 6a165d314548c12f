// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "fdrsma/autodiff.hpp"
#include "fdrsma/constraints.hpp"
#include "fdrsma/decision.hpp"

namespace fdrsma {

/// Flat per-block gradient of the meta-loss total. Layouts match
/// get_block/set_block exactly.
struct BlockGrads {
    std::vector<double> p, w, z, c, u;
    MetaLossBreakdown terms{}; // values at the evaluation point
    bool finite = true;        // false when the graph produced NaN/Inf
    int bad_node = -1;         // first offending tape node when !finite

    const std::vector<double>& block(Block b) const {
        switch (b) {
            case Block::P: return p;
            case Block::W: return w;
            case Block::Z: return z;
            case Block::C: return c;
            case Block::U: return u;
        }
        return p;
    }
};

/// Exact reverse-mode gradient of meta_loss(...).total with respect to every
/// variable block at the given point.
BlockGrads meta_loss_grad(const Instance& inst, const DecisionVariables& v,
                          const MobilityMask& mask, const SystemConfig& cfg,
                          const PenaltyWeights& w);

/// Central finite differences over the same block layout; the independent
/// oracle for meta_loss_grad. h_rel scales per-coordinate steps by
/// max(1, |x_i|).
BlockGrads finite_diff_meta_loss(const Instance& inst, const DecisionVariables& v,
                                 const MobilityMask& mask, const SystemConfig& cfg,
                                 const PenaltyWeights& w, double h_rel = 1e-6);

} // namespace fdrsma
