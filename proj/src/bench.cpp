// SPDX-License-Identifier: Apache-2.0
#include "fdrsma/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fdrsma {

SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "bs_power_dbm") return SweepAxis::BsPowerDbm;
    if (s == "ue_power_dbm") return SweepAxis::UePowerDbm;
    if (s == "si_db") return SweepAxis::SiDb;
    if (s == "dl_rate_threshold") return SweepAxis::DlRateThreshold;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

std::string sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::BsPowerDbm: return "bs_power_dbm";
        case SweepAxis::UePowerDbm: return "ue_power_dbm";
        case SweepAxis::SiDb: return "si_db";
        case SweepAxis::DlRateThreshold: return "dl_rate_threshold";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("experiment spec: empty sweep value list");
    if (scenarios.empty()) throw std::invalid_argument("experiment spec: no scenarios");
    if (n_realizations < 1) throw std::invalid_argument("experiment spec: realizations < 1");
    if (format != "csv" && format != "json-lines")
        throw std::invalid_argument("experiment spec: format must be csv or json-lines");
    hyper.validate();
}

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<Scenario> parse_scenario_list(const std::string& s) {
    std::vector<Scenario> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t b = item.find_first_not_of(" \t");
        size_t e = item.find_last_not_of(" \t");
        out.push_back(scenario_from_string(item.substr(b, e - b + 1)));
    }
    return out;
}

void apply_axis(SystemConfig& cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::BsPowerDbm: cfg.bs_power_dbm = value; break;
        case SweepAxis::UePowerDbm: cfg.ue_power_dbm = value; break;
        case SweepAxis::SiDb: cfg.si_db = value; break;
        case SweepAxis::DlRateThreshold: cfg.dl_rate_threshold = value; break;
    }
}

int worker_count() {
    if (const char* env = std::getenv("FDRSMA_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 4;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

ExperimentSpec spec_from_kv(const KeyValues& kv) {
    ExperimentSpec spec;
    apply_system_keys(spec.base, kv);
    spec.base.finalize();
    spec.hyper = default_hyper(spec.base);
    for (const auto& [key, val] : kv) {
        if (key.rfind("system.", 0) == 0) continue;
        if (key == "sweep.axis") spec.axis = sweep_axis_from_string(val);
        else if (key == "sweep.values") spec.values = parse_double_list(val);
        else if (key == "scenarios") spec.scenarios = parse_scenario_list(val);
        else if (key == "realizations") spec.n_realizations = std::stoi(val);
        else if (key == "seed0") spec.seed0 = std::stoull(val);
        else if (key == "out") spec.out_path = val;
        else if (key == "format") spec.format = val;
        else if (key == "hyper.n_inner") spec.hyper.n_inner = std::stoi(val);
        else if (key == "hyper.n_outer") spec.hyper.n_outer = std::stoi(val);
        else if (key == "hyper.n_epochs") spec.hyper.n_epochs = std::stoi(val);
        else if (key == "hyper.gamma") spec.hyper.gamma = std::stod(val);
        else if (key == "hyper.hidden") spec.hyper.hidden = std::stoi(val);
        else if (key == "hyper.rho1") spec.hyper.weights.rho1 = std::stod(val);
        else if (key == "hyper.rho2") spec.hyper.weights.rho2 = std::stod(val);
        else if (key == "hyper.rho3") spec.hyper.weights.rho3 = std::stod(val);
        else if (key == "hyper.rho4") spec.hyper.weights.rho4 = std::stod(val);
        else if (key == "hyper.lr_p") spec.hyper.lr_p = std::stod(val);
        else if (key == "hyper.lr_w") spec.hyper.lr_w = std::stod(val);
        else if (key == "hyper.lr_z") spec.hyper.lr_z = std::stod(val);
        else if (key == "hyper.lr_c") spec.hyper.lr_c = std::stod(val);
        else if (key == "hyper.lr_u") spec.hyper.lr_u = std::stod(val);
        else if (key == "hyper.lr") {
            double lr = std::stod(val);
            spec.hyper.lr_p = spec.hyper.lr_w = spec.hyper.lr_z = spec.hyper.lr_c =
                spec.hyper.lr_u = lr;
        } else throw std::invalid_argument("unknown spec key: " + key);
    }
    return spec;
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    struct Task {
        Scenario scenario;
        double value;
        int realization;
    };
    std::vector<Task> tasks;
    for (Scenario sc : spec.scenarios)
        for (double v : spec.values)
            for (int r = 0; r < spec.n_realizations; ++r) tasks.push_back({sc, v, r});

    std::vector<ResultRecord> records(tasks.size());
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            SystemConfig cfg = spec.base;
            apply_axis(cfg, spec.axis, t.value);
            cfg.finalize();
            std::uint64_t seed = spec.seed0 + static_cast<std::uint64_t>(t.realization);
            Instance inst = sample_instance(cfg, seed);
            GmlHyperParams hyper = spec.hyper;
            hyper.scenario = t.scenario;
            RunResult run = run_gml(cfg, inst, hyper, seed);
            ResultRecord rec;
            rec.sweep_value = t.value;
            rec.scenario = scenario_name(t.scenario);
            rec.seed = seed;
            rec.sum_rate = run.best_objective;
            rec.dl_rate = run.best_report.dl_sum;
            rec.ul_rate = run.best_report.ul_sum;
            rec.feasible = run.feasible;
            rec.epochs = run.epochs_run;
            rec.seconds = run.seconds;
            records[i] = rec;
        }
    };

    int n_workers = std::min<size_t>(worker_count(), tasks.size());
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return records;
}

std::string render_records(const std::vector<ResultRecord>& records, const std::string& format) {
    std::ostringstream out;
    if (format == "csv") {
        out << "sweep,scenario,seed,sum_rate,dl_rate,ul_rate,feasible,epochs,seconds\n";
        for (const auto& r : records)
            out << fmt_double(r.sweep_value) << ',' << r.scenario << ',' << r.seed << ','
                << fmt_double(r.sum_rate) << ',' << fmt_double(r.dl_rate) << ','
                << fmt_double(r.ul_rate) << ',' << (r.feasible ? "true" : "false") << ','
                << r.epochs << ',' << fmt_double(r.seconds) << '\n';
    } else if (format == "json-lines") {
        for (const auto& r : records)
            out << "{\"sweep\":" << fmt_double(r.sweep_value) << ",\"scenario\":\"" << r.scenario
                << "\",\"seed\":" << r.seed << ",\"sum_rate\":" << fmt_double(r.sum_rate)
                << ",\"dl_rate\":" << fmt_double(r.dl_rate)
                << ",\"ul_rate\":" << fmt_double(r.ul_rate)
                << ",\"feasible\":" << (r.feasible ? "true" : "false")
                << ",\"epochs\":" << r.epochs << ",\"seconds\":" << fmt_double(r.seconds) << "}\n";
    } else {
        throw std::invalid_argument("unknown output format: " + format);
    }
    return out.str();
}

void emit_records(const std::vector<ResultRecord>& records, const std::string& format,
                  const std::string& path) {
    std::string text = render_records(records, format);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRecord> parse_csv_records(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ResultRecord> out;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        ResultRecord r;
        std::getline(ls, field, ',');
        r.sweep_value = std::stod(field);
        std::getline(ls, r.scenario, ',');
        std::getline(ls, field, ',');
        r.seed = std::stoull(field);
        std::getline(ls, field, ',');
        r.sum_rate = std::stod(field);
        std::getline(ls, field, ',');
        r.dl_rate = std::stod(field);
        std::getline(ls, field, ',');
        r.ul_rate = std::stod(field);
        std::getline(ls, field, ',');
        r.feasible = (field == "true");
        std::getline(ls, field, ',');
        r.epochs = std::stoi(field);
        std::getline(ls, field, ',');
        r.seconds = std::stod(field);
        out.push_back(r);
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
    std::map<std::pair<std::string, double>, std::vector<const ResultRecord*>> groups;
    for (const auto& r : records) groups[{r.scenario, r.sweep_value}].push_back(&r);
    std::vector<SummaryRow> out;
    for (const auto& [key, recs] : groups) {
        SummaryRow row;
        row.scenario = key.first;
        row.sweep_value = key.second;
        row.count = static_cast<int>(recs.size());
        int feas = 0;
        double sum = 0.0, sum2 = 0.0;
        for (const auto* r : recs) {
            if (!r->feasible) continue;
            ++feas;
            sum += r->sum_rate;
            sum2 += r->sum_rate * r->sum_rate;
        }
        row.feasible_fraction = static_cast<double>(feas) / recs.size();
        if (feas > 0) {
            row.mean_sum_rate = sum / feas;
            double var = sum2 / feas - row.mean_sum_rate * row.mean_sum_rate;
            row.std_sum_rate = std::sqrt(std::max(var, 0.0));
        }
        out.push_back(row);
    }
    return out;
}

} // namespace fdrsma
