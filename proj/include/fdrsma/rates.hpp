// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fdrsma/autodiff.hpp"
#include "fdrsma/decision.hpp"

namespace fdrsma {

template <class S>
struct RateBreakdown {
    std::vector<S> r_c;         // common-stream rate per DL UE
    S r_c_floor;                // min over r_c
    std::vector<S> r_p;         // private rate per DL UE
    std::vector<S> r_dl_total;  // c[d] + r_p[d]
    std::vector<S> r_ul_stream; // per UL stream (flat stream ids)
    std::vector<S> r_ul_user;   // per UL UE
    S dl_sum, ul_sum, sum;
};

using RateReport = RateBreakdown<double>;

namespace detail {

/// Intra-cell interference power at DL UE d: every UL stream's power through
/// the scalar cross channel.
template <class S>
S ul_interference_at_dl(int d, const Channels<S>& ch, const Decision<S>& v,
                        const SystemConfig& cfg) {
    S acc = v.p[0] * abs2(ch.x[cfg.stream_user(0)][d]);
    for (int s = 1; s < cfg.n_streams(); ++s) acc = acc + v.p[s] * abs2(ch.x[cfg.stream_user(s)][d]);
    return acc;
}

/// Z_s^H H_SI^H (W_c + sum_d W_{p,d}) residual self-interference power.
template <class S>
S si_power(const std::vector<Cx<S>>& z_s, const Channels<S>& ch, const Decision<S>& v) {
    const size_t n_t = v.w_common.size();
    const size_t n_r = z_s.size();
    Cx<S> acc{z_s[0].re * 0.0, z_s[0].re * 0.0};
    for (size_t nt = 0; nt < n_t; ++nt) {
        Cx<S> w_tot = v.w_common[nt];
        for (const auto& wp : v.w_private) w_tot = w_tot + wp[nt];
        for (size_t nr = 0; nr < n_r; ++nr)
            acc = acc + conj(z_s[nr]) * (conj(ch.si[nt][nr]) * w_tot);
    }
    return abs2(acc);
}

} // namespace detail

/// Rate to decode the common stream at DL UE d. The denominator sums the
/// private-stream power of every DL UE, d's own included.
template <class S>
S dl_common_rate(int d, const Channels<S>& ch, const Decision<S>& v, const SystemConfig& cfg) {
    using std::log2;
    const auto& h = ch.dl[d];
    S num = abs2(hdot(h, v.w_common));
    S den = detail::ul_interference_at_dl(d, ch, v, cfg) + cfg.noise_w;
    for (const auto& wp : v.w_private) den = den + abs2(hdot(h, wp));
    return log2(1.0 + num / den);
}

/// Rate to decode UE d's private stream once the common stream is removed.
template <class S>
S dl_private_rate(int d, const Channels<S>& ch, const Decision<S>& v, const SystemConfig& cfg) {
    using std::log2;
    const auto& h = ch.dl[d];
    S num = abs2(hdot(h, v.w_private[d]));
    S den = detail::ul_interference_at_dl(d, ch, v, cfg) + cfg.noise_w;
    for (int dd = 0; dd < static_cast<int>(v.w_private.size()); ++dd)
        if (dd != d) den = den + abs2(hdot(h, v.w_private[dd]));
    return log2(1.0 + num / den);
}

template <class S>
S common_rate_floor(const std::vector<S>& rates) {
    return list_min(rates);
}

/// Rate of UL stream s under the configured decoding order. SIC mode counts
/// only not-yet-decoded streams as interference; literal mode counts every
/// other stream regardless of rank.
template <class S>
S ul_stream_rate(int s, const std::vector<int>& order, const Channels<S>& ch, const Decision<S>& v,
                 const SystemConfig& cfg) {
    using std::log2;
    const int n = cfg.n_streams();
    std::vector<int> rank(n, -1);
    for (int i = 0; i < n; ++i) {
        if (order[i] < 0 || order[i] >= n || rank[order[i]] >= 0)
            throw std::invalid_argument("ul_stream_rate: invalid decoding order");
        rank[order[i]] = i;
    }
    const auto& z_s = v.z[s];
    S num = v.p[s] * abs2(hdot(z_s, ch.ul[cfg.stream_user(s)]));
    S den = detail::si_power(z_s, ch, v) + cfg.noise_w * norm2(z_s);
    for (int o = 0; o < n; ++o) {
        if (o == s) continue;
        if (!cfg.literal_interference && rank[o] < rank[s]) continue;
        den = den + v.p[o] * abs2(hdot(z_s, ch.ul[cfg.stream_user(o)]));
    }
    return log2(1.0 + num / den);
}

template <class S>
RateBreakdown<S> compute_rates(const Channels<S>& ch, const Decision<S>& v,
                               const SystemConfig& cfg) {
    RateBreakdown<S> r;
    const int D = cfg.n_dl;
    const int U = cfg.n_ul;
    for (int d = 0; d < D; ++d) r.r_c.push_back(dl_common_rate(d, ch, v, cfg));
    r.r_c_floor = common_rate_floor(r.r_c);
    for (int d = 0; d < D; ++d) r.r_p.push_back(dl_private_rate(d, ch, v, cfg));
    for (int d = 0; d < D; ++d) r.r_dl_total.push_back(v.c[d] + r.r_p[d]);
    for (int s = 0; s < cfg.n_streams(); ++s)
        r.r_ul_stream.push_back(ul_stream_rate(s, cfg.decode_order, ch, v, cfg));
    for (int u = 0; u < U - 1; ++u)
        r.r_ul_user.push_back(r.r_ul_stream[cfg.split_stream(u, 0)] +
                              r.r_ul_stream[cfg.split_stream(u, 1)]);
    r.r_ul_user.push_back(r.r_ul_stream[cfg.unsplit_stream()]);
    r.dl_sum = r.r_dl_total[0];
    for (int d = 1; d < D; ++d) r.dl_sum = r.dl_sum + r.r_dl_total[d];
    r.ul_sum = r.r_ul_user[0];
    for (int u = 1; u < U; ++u) r.ul_sum = r.ul_sum + r.r_ul_user[u];
    r.sum = r.dl_sum + r.ul_sum;
    return r;
}

/// Total UL rate of user u (sum of its sub-streams).
inline double ul_user_rate(int u, const RateReport& report) { return report.r_ul_user[u]; }

/// Objective of the sum-rate problems: total DL + UL rate with the common
/// shares c[d] counted on the DL side.
inline std::pair<double, RateReport> sum_rate_objective(const Instance& inst,
                                                        const DecisionVariables& v,
                                                        const SystemConfig& cfg) {
    auto ch = assemble_channels(inst, v, cfg);
    auto r = compute_rates(ch, v, cfg);
    return {r.sum, r};
}

} // namespace fdrsma
