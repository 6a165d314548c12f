// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/config.hpp"

#include <fstream>
#include <sstream>

namespace fdrsma {

void SystemConfig::finalize() {
    g0 = db_to_linear(g0_db);
    g01 = db_to_linear(g01_db);
    si_gain = db_to_linear(si_db);
    noise_w = dbm_to_watts(noise_dbm);
    bs_power_w = dbm_to_watts(bs_power_dbm);
    ue_power_w = dbm_to_watts(ue_power_dbm);
    if (decode_order.empty()) {
        for (int u = 0; u < n_ul - 1; ++u) decode_order.push_back(split_stream(u, 0));
        decode_order.push_back(unsplit_stream());
        for (int u = 0; u < n_ul - 1; ++u) decode_order.push_back(split_stream(u, 1));
    }
    validate();
}

void SystemConfig::validate() const {
    if (n_t < 1 || n_r < 1 || n_dl < 1 || n_ul < 1 || n_paths < 1)
        throw std::invalid_argument("antenna/UE/path counts must be positive");
    if (n_dl > n_t || n_ul > n_r)
        throw std::invalid_argument("requires D <= N_T and U <= N_R");
    if (wavelength <= 0.0 || region_half <= 0.0 || cell_size <= 0.0)
        throw std::invalid_argument("geometry parameters must be positive");
    if (!decode_order.empty()) {
        if (static_cast<int>(decode_order.size()) != n_streams())
            throw std::invalid_argument("decode_order must rank every UL stream");
        std::vector<bool> seen(n_streams(), false);
        for (int s : decode_order) {
            if (s < 0 || s >= n_streams() || seen[s])
                throw std::invalid_argument("decode_order is not a permutation");
            seen[s] = true;
        }
    }
}

static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

KeyValues parse_kv_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": missing '='");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

KeyValues parse_kv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_kv_text(ss.str());
}

namespace {

double to_double(const std::string& k, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::invalid_argument("bad numeric value for " + k + ": '" + v + "'");
    }
}

int to_int(const std::string& k, const std::string& v) {
    double d = to_double(k, v);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw std::invalid_argument("expected integer for " + k + ": '" + v + "'");
    return i;
}

bool to_bool(const std::string& k, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("expected boolean for " + k + ": '" + v + "'");
}

std::vector<int> to_int_list(const std::string& k, const std::string& v) {
    std::vector<int> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_int(k, trim(item)));
    return out;
}

} // namespace

void apply_system_keys(SystemConfig& cfg, const KeyValues& kv) {
    for (const auto& [key, val] : kv) {
        if (key.rfind("system.", 0) != 0) continue;
        std::string k = key.substr(7);
        if (k == "n_t") cfg.n_t = to_int(key, val);
        else if (k == "n_r") cfg.n_r = to_int(key, val);
        else if (k == "n_dl") cfg.n_dl = to_int(key, val);
        else if (k == "n_ul") cfg.n_ul = to_int(key, val);
        else if (k == "n_paths") cfg.n_paths = to_int(key, val);
        else if (k == "wavelength") cfg.wavelength = to_double(key, val);
        else if (k == "region_half") cfg.region_half = to_double(key, val);
        else if (k == "min_ma_dist") cfg.min_ma_dist = to_double(key, val);
        else if (k == "cell_size") cfg.cell_size = to_double(key, val);
        else if (k == "g0_db") cfg.g0_db = to_double(key, val);
        else if (k == "g01_db") cfg.g01_db = to_double(key, val);
        else if (k == "alpha") cfg.alpha = to_double(key, val);
        else if (k == "alpha1") cfg.alpha1 = to_double(key, val);
        else if (k == "si_db") cfg.si_db = to_double(key, val);
        else if (k == "noise_dbm") cfg.noise_dbm = to_double(key, val);
        else if (k == "bs_power_dbm") cfg.bs_power_dbm = to_double(key, val);
        else if (k == "ue_power_dbm") cfg.ue_power_dbm = to_double(key, val);
        else if (k == "dl_rate_threshold") cfg.dl_rate_threshold = to_double(key, val);
        else if (k == "ul_rate_threshold") cfg.ul_rate_threshold = to_double(key, val);
        else if (k == "literal_interference") cfg.literal_interference = to_bool(key, val);
        else if (k == "project_only_if_exceeded") cfg.project_only_if_exceeded = to_bool(key, val);
        else if (k == "decode_order") cfg.decode_order = to_int_list(key, val);
        else throw std::invalid_argument("unknown config key: " + key);
    }
}

} // namespace fdrsma
