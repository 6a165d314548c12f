// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/gradient.hpp"

namespace fdrsma {

namespace {

using ad::Tape;
using ad::Var;

struct LeafMap {
    std::vector<int> p, w, z, c, u;
};

std::vector<Cx<Var>> leaf_cvec(Tape& t, const std::vector<Cx<double>>& v, std::vector<int>& idx) {
    std::vector<Cx<Var>> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        Var re = ad::make_leaf(t, e.re);
        Var im = ad::make_leaf(t, e.im);
        idx.push_back(re.i);
        idx.push_back(im.i);
        out.push_back({re, im});
    }
    return out;
}

std::vector<Vec2<Var>> leaf_positions(Tape& t, const std::vector<Position2D>& pos,
                                      std::vector<int>* idx) {
    std::vector<Vec2<Var>> out;
    out.reserve(pos.size());
    for (const auto& p : pos) {
        Var x = ad::make_leaf(t, p.x);
        Var y = ad::make_leaf(t, p.y);
        if (idx) {
            idx->push_back(x.i);
            idx->push_back(y.i);
        }
        out.push_back({x, y});
    }
    return out;
}

std::vector<double> gather(const std::vector<double>& adj, const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(adj[i]);
    return out;
}

} // namespace

BlockGrads meta_loss_grad(const Instance& inst, const DecisionVariables& v,
                          const MobilityMask& mask, const SystemConfig& cfg,
                          const PenaltyWeights& w) {
    Tape tape;
    tape.reserve(1 << 14);
    LeafMap leaves;

    Decision<Var> dv;
    for (double x : v.p) {
        Var l = ad::make_leaf(tape, x);
        leaves.p.push_back(l.i);
        dv.p.push_back(l);
    }
    dv.w_common = leaf_cvec(tape, v.w_common, leaves.w);
    for (const auto& wp : v.w_private) dv.w_private.push_back(leaf_cvec(tape, wp, leaves.w));
    for (const auto& z : v.z) dv.z.push_back(leaf_cvec(tape, z, leaves.z));
    for (double x : v.c) {
        Var l = ad::make_leaf(tape, x);
        leaves.c.push_back(l.i);
        dv.c.push_back(l);
    }
    // Position groups: movable ones are tracked leaves, fixed ones leaves too
    // (their adjoints are simply never read).
    dv.t_bs = leaf_positions(tape, v.t_bs, mask.bs_t ? &leaves.u : nullptr);
    dv.r_bs = leaf_positions(tape, v.r_bs, mask.bs_r ? &leaves.u : nullptr);
    dv.t_ul = leaf_positions(tape, v.t_ul, mask.ue_ul ? &leaves.u : nullptr);
    dv.r_dl = leaf_positions(tape, v.r_dl, mask.ue_dl ? &leaves.u : nullptr);

    auto terms = meta_loss(inst, dv, cfg, w);

    BlockGrads g;
    g.terms = {terms.rate.v,   terms.threshold.v, terms.norm.v,
               terms.common.v, terms.ma_dist.v,   terms.total.v};
    if (tape.first_bad() >= 0) {
        g.finite = false;
        g.bad_node = tape.first_bad();
        return g;
    }
    auto adj = tape.backward(terms.total.i);
    g.p = gather(adj, leaves.p);
    g.w = gather(adj, leaves.w);
    g.z = gather(adj, leaves.z);
    g.c = gather(adj, leaves.c);
    g.u = gather(adj, leaves.u);
    return g;
}

BlockGrads finite_diff_meta_loss(const Instance& inst, const DecisionVariables& v,
                                 const MobilityMask& mask, const SystemConfig& cfg,
                                 const PenaltyWeights& w, double h_rel) {
    auto eval = [&](const DecisionVariables& x) { return meta_loss(inst, x, cfg, w).total; };
    BlockGrads g;
    g.terms = meta_loss(inst, v, cfg, w);
    for (Block b : {Block::P, Block::W, Block::Z, Block::C, Block::U}) {
        std::vector<double> flat = get_block(v, b, mask);
        std::vector<double> grad(flat.size());
        for (size_t i = 0; i < flat.size(); ++i) {
            double h = h_rel * std::max(1.0, std::abs(flat[i]));
            DecisionVariables tmp = v;
            std::vector<double> f2 = flat;
            f2[i] = flat[i] + h;
            set_block(tmp, b, mask, f2);
            double up = eval(tmp);
            f2[i] = flat[i] - h;
            set_block(tmp, b, mask, f2);
            double down = eval(tmp);
            grad[i] = (up - down) / (2.0 * h);
        }
        switch (b) {
            case Block::P: g.p = std::move(grad); break;
            case Block::W: g.w = std::move(grad); break;
            case Block::Z: g.z = std::move(grad); break;
            case Block::C: g.c = std::move(grad); break;
            case Block::U: g.u = std::move(grad); break;
        }
    }
    return g;
}

} // namespace fdrsma
