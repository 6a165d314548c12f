// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrsma {

/// All physical and protocol constants of the simulated system. dB/dBm
/// fields are what config files carry; finalize() converts them to the
/// linear-scale fields once, and everything downstream works in watts and
/// linear gains.
struct SystemConfig {
    int n_t = 4;     // BS transmit antennas
    int n_r = 4;     // BS receive antennas
    int n_dl = 2;    // DL UEs (D)
    int n_ul = 2;    // UL UEs (U)
    int n_paths = 6; // paths per link (L)

    double wavelength = 0.01;    // meters
    double region_half = 0.02;   // A, MA region is [-A,A]^2
    double min_ma_dist = 0.005;  // DS, minimum inter-MA spacing at the BS
    double cell_size = 200.0;    // UE placement square, meters

    double g0_db = -40.0;   // path gain at 1 m, BS<->UE links
    double g01_db = -50.0;  // path gain at 1 m, UL->DL cross links
    double alpha = 2.8;     // path-loss exponent, BS<->UE
    double alpha1 = 3.5;    // path-loss exponent, cross links
    double si_db = -90.0;   // residual self-interference power
    double noise_dbm = -90.0;

    double bs_power_dbm = 30.0;
    double ue_power_dbm = 23.0;  // per-UE budget, split and unsplit alike
    double dl_rate_threshold = 1.0;  // bps/Hz
    double ul_rate_threshold = 1.0;  // bps/Hz

    // Interference bookkeeping for UL decoding: false = SIC-aware sets,
    // true = the order-agnostic sets as printed.
    bool literal_interference = false;
    // BS beamformer projection: false = always rescale to the budget,
    // true = rescale only when the budget is exceeded.
    bool project_only_if_exceeded = false;

    // Stream ids in decoding sequence. Empty = default order: first
    // sub-message of every split user, then the unsplit user, then the
    // second sub-messages.
    std::vector<int> decode_order;

    // Derived linear-scale values, filled by finalize().
    double g0 = 0.0;
    double g01 = 0.0;
    double si_gain = 0.0;
    double noise_w = 0.0;
    double bs_power_w = 0.0;
    double ue_power_w = 0.0;

    int n_streams() const { return 2 * (n_ul - 1) + 1; }
    int unsplit_stream() const { return 2 * (n_ul - 1); }
    /// Stream id for sub-message j of split user u (u < n_ul-1).
    int split_stream(int u, int j) const { return 2 * u + j; }
    /// UL user owning stream s.
    int stream_user(int s) const { return s == unsplit_stream() ? n_ul - 1 : s / 2; }

    void finalize();
    void validate() const;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Flat dotted-key config file support ("system.n_t = 4", '#' comments).
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_kv_file(const std::string& path);
KeyValues parse_kv_text(const std::string& text);

/// Applies every "system."-prefixed key to cfg. Throws std::invalid_argument
/// on unknown keys or malformed values. Does not call finalize().
void apply_system_keys(SystemConfig& cfg, const KeyValues& kv);

} // namespace fdrsma
