// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fdrsma/config.hpp"
#include "fdrsma/cx.hpp"

namespace fdrsma {

using Position2D = Vec2<double>;

/// Per-link multipath description: transmit-side and receive-side angle
/// lists plus the path-response matrix between the two reference points.
struct PathSet {
    std::vector<double> theta_t, phi_t; // length Lt
    std::vector<double> theta_r, phi_r; // length Lr
    // Lr x Lt. The default sampling protocol fills it diagonally.
    std::vector<std::vector<std::complex<double>>> prm;

    int lt() const { return static_cast<int>(theta_t.size()); }
    int lr() const { return static_cast<int>(theta_r.size()); }
};

struct LinkBudget {
    double g0 = 0.0;
    double alpha = 0.0;
    double distance = 0.0;
    double variance_per_path = 0.0;
};

/// One random channel realization.
struct Instance {
    std::vector<PathSet> dl_paths;               // D
    std::vector<PathSet> ul_paths;               // U
    PathSet si_paths;
    std::vector<std::vector<PathSet>> xlink_paths; // U x D

    std::vector<LinkBudget> dl_budgets; // D
    std::vector<LinkBudget> ul_budgets; // U
    LinkBudget si_budget;
    std::vector<std::vector<LinkBudget>> xlink_budgets; // U x D

    std::vector<Position2D> dl_placements; // global meters, BS at origin
    std::vector<Position2D> ul_placements;
};

/// Deterministic instance sampler (pure function of config and seed):
/// placements uniform in the cell, angles i.i.d. uniform in [0, 2pi],
/// diagonal PRMs with circularly symmetric Gaussian entries of the
/// per-link variance.
Instance sample_instance(const SystemConfig& cfg, std::uint64_t seed);

/// Scales the self-interference path responses so the instance corresponds
/// to residual SI power `si_linear` instead of the one it was sampled at.
void rescale_si(Instance& inst, double sampled_si_linear, double si_linear);

// ---------------------------------------------------------------------------
// Field-response channel assembly, generic over the scalar type so the same
// code paths serve plain evaluation and tape-based differentiation.

/// Projection of a position onto a path direction:
/// x cos(theta) sin(phi) + y sin(theta).
template <class S>
S phase_offset(const Vec2<S>& p, double theta, double phi) {
    return p.x * (std::cos(theta) * std::sin(phi)) + p.y * std::sin(theta);
}

/// Unit-modulus per-path phase vector at position p.
template <class S>
std::vector<Cx<S>> field_response_vector(const Vec2<S>& p, const std::vector<double>& theta,
                                         const std::vector<double>& phi, double wavelength) {
    if (theta.size() != phi.size() || theta.empty())
        throw std::invalid_argument("field_response_vector: bad angle lists");
    if (wavelength <= 0.0) throw std::invalid_argument("field_response_vector: wavelength");
    const double k = 2.0 * std::numbers::pi / wavelength;
    std::vector<Cx<S>> out;
    out.reserve(theta.size());
    for (size_t i = 0; i < theta.size(); ++i) out.push_back(expj(phase_offset(p, theta[i], phi[i]) * k));
    return out;
}

namespace detail {

/// Receive-side fold: a_l = sum_i conj(f_i) Sigma[i][l].
template <class S>
std::vector<Cx<S>> fold_receive(const std::vector<Cx<S>>& f, const PathSet& ps) {
    if (static_cast<int>(f.size()) != ps.lr() || static_cast<int>(ps.prm.size()) != ps.lr())
        throw std::invalid_argument("channel assembly: PRM/FRV dimension mismatch");
    std::vector<Cx<S>> a;
    a.reserve(ps.lt());
    for (int l = 0; l < ps.lt(); ++l) {
        Cx<S> acc = conj(f[0]) * ps.prm[0][l];
        for (int i = 1; i < ps.lr(); ++i) acc = acc + conj(f[i]) * ps.prm[i][l];
        a.push_back(acc);
    }
    return a;
}

} // namespace detail

/// h_d = (f^H(r_dl) Sigma G(t))^T, one entry per BS transmit antenna.
template <class S>
std::vector<Cx<S>> assemble_dl_channel(const std::vector<Vec2<S>>& t_bs, const Vec2<S>& r_dl,
                                       const PathSet& ps, double wavelength) {
    auto f = field_response_vector(r_dl, ps.theta_r, ps.phi_r, wavelength);
    auto a = detail::fold_receive(f, ps);
    std::vector<Cx<S>> h;
    h.reserve(t_bs.size());
    for (const auto& t : t_bs) {
        auto g = field_response_vector(t, ps.theta_t, ps.phi_t, wavelength);
        Cx<S> acc = a[0] * g[0];
        for (size_t l = 1; l < g.size(); ++l) acc = acc + a[l] * g[l];
        h.push_back(acc);
    }
    return h;
}

/// h_u = F^H(r_bs) Sigma g(t_ul), one entry per BS receive antenna.
template <class S>
std::vector<Cx<S>> assemble_ul_channel(const Vec2<S>& t_ul, const std::vector<Vec2<S>>& r_bs,
                                       const PathSet& ps, double wavelength) {
    auto g = field_response_vector(t_ul, ps.theta_t, ps.phi_t, wavelength);
    std::vector<Cx<S>> h;
    h.reserve(r_bs.size());
    for (const auto& r : r_bs) {
        auto f = field_response_vector(r, ps.theta_r, ps.phi_r, wavelength);
        auto a = detail::fold_receive(f, ps);
        Cx<S> acc = a[0] * g[0];
        for (size_t l = 1; l < g.size(); ++l) acc = acc + a[l] * g[l];
        h.push_back(acc);
    }
    return h;
}

/// H_SI = (F^H(r_bs) Sigma G(t_bs))^T, N_T x N_R. Its Hermitian transpose
/// left-multiplies the transmitted vector at the BS receiver.
template <class S>
std::vector<std::vector<Cx<S>>> assemble_si_channel(const std::vector<Vec2<S>>& t_bs,
                                                    const std::vector<Vec2<S>>& r_bs,
                                                    const PathSet& ps, double wavelength) {
    std::vector<std::vector<Cx<S>>> a_cols; // per receive antenna
    a_cols.reserve(r_bs.size());
    for (const auto& r : r_bs) {
        auto f = field_response_vector(r, ps.theta_r, ps.phi_r, wavelength);
        a_cols.push_back(detail::fold_receive(f, ps));
    }
    std::vector<std::vector<Cx<S>>> h(t_bs.size());
    for (size_t nt = 0; nt < t_bs.size(); ++nt) {
        auto g = field_response_vector(t_bs[nt], ps.theta_t, ps.phi_t, wavelength);
        h[nt].reserve(r_bs.size());
        for (size_t nr = 0; nr < r_bs.size(); ++nr) {
            Cx<S> acc = a_cols[nr][0] * g[0];
            for (size_t l = 1; l < g.size(); ++l) acc = acc + a_cols[nr][l] * g[l];
            h[nt].push_back(acc);
        }
    }
    return h;
}

/// h_{u,d} = f^H(r_dl) Sigma g(t_ul), scalar.
template <class S>
Cx<S> assemble_xlink_channel(const Vec2<S>& t_ul, const Vec2<S>& r_dl, const PathSet& ps,
                             double wavelength) {
    auto f = field_response_vector(r_dl, ps.theta_r, ps.phi_r, wavelength);
    auto a = detail::fold_receive(f, ps);
    auto g = field_response_vector(t_ul, ps.theta_t, ps.phi_t, wavelength);
    Cx<S> acc = a[0] * g[0];
    for (size_t l = 1; l < g.size(); ++l) acc = acc + a[l] * g[l];
    return acc;
}

} // namespace fdrsma
