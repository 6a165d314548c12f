// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrsma/gml.hpp"

namespace fdrsma {

enum class SweepAxis { BsPowerDbm, UePowerDbm, SiDb, DlRateThreshold };

SweepAxis sweep_axis_from_string(const std::string& s);
std::string sweep_axis_name(SweepAxis a);

/// Batch experiment description: one sweep axis, a set of scenarios, and
/// seeded channel realizations shared across scenarios for paired comparison.
struct ExperimentSpec {
    SystemConfig base;  // finalized per sweep value after the axis is applied
    SweepAxis axis = SweepAxis::BsPowerDbm;
    std::vector<double> values;
    std::vector<Scenario> scenarios;
    int n_realizations = 1;
    std::uint64_t seed0 = 1;
    GmlHyperParams hyper;
    std::string out_path;
    std::string format = "csv"; // csv | json-lines

    void validate() const;
};

/// Builds a spec from dotted-key text (system.*, sweep.*, hyper.*, plus
/// scenarios/realizations/seed0/out/format keys).
ExperimentSpec spec_from_kv(const KeyValues& kv);

struct ResultRecord {
    double sweep_value = 0.0;
    std::string scenario;
    std::uint64_t seed = 0;
    double sum_rate = 0.0;
    double dl_rate = 0.0;
    double ul_rate = 0.0;
    bool feasible = false;
    int epochs = 0;
    double seconds = 0.0;
};

/// Runs |scenarios| x |values| x n_realizations GML runs. Realization r of a
/// sweep value uses instance seed seed0 + r in every scenario. Fanned out to
/// a bounded worker pool (FDRSMA_WORKERS), merged in spec order.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec);

void emit_records(const std::vector<ResultRecord>& records, const std::string& format,
                  const std::string& path);
std::string render_records(const std::vector<ResultRecord>& records, const std::string& format);
std::vector<ResultRecord> parse_csv_records(const std::string& text);

struct SummaryRow {
    std::string scenario;
    double sweep_value = 0.0;
    int count = 0;
    double mean_sum_rate = 0.0; // over feasible records only
    double std_sum_rate = 0.0;
    double feasible_fraction = 0.0;
};

/// Per-(scenario, sweep value) mean/std of the sum rate over feasible records
/// plus the feasibility fraction over all records.
std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

} // namespace fdrsma
