#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbrach/config_file.hpp"

namespace nbrach::experiment {

// A sweep to execute: named presets pin the variable, grid, scheme set and
// slot count; "custom" takes them from the config file.
struct ExperimentSpec {
    std::string name = "custom";
    std::string sweep_var;
    std::vector<double> grid;
    std::vector<Scheme> schemes;
    FullConfig base;
    bool run_analytic = true;
    bool run_sim = false;
    int slots = 1;
    bool emit_last_slot_only = false;
    bool single_group_variants = false;  // add the one-group comparison rows
    int trials = 200;
    std::uint64_t master_seed = 1;
    int threads = 1;

    void validate() const;
};

// Known experiment names, in registry order.
std::vector<std::string> experiment_names();

// Builds the preset on top of a base configuration; name "custom" requires
// base.sweep_var/base.sweep_grid.
ExperimentSpec make_experiment(const std::string& name, FullConfig base);

struct ResultRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    int slot = 1;
    int group = 0;
    std::string case_label;  // case1 | case2 | single_pc | single_fp
    std::string scheme;
    std::string mode;        // analytic | sim
    bool has_analytic = false;
    double p_analytic = 0.0;
    bool has_mc = false;
    double p_mc = 0.0;
    double ci_half = 0.0;
    std::string diag;
    bool failed = false;     // row-level error; diag carries the message
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
};

// Executes the sweep; deterministic for a fixed spec (including seed and any
// thread count). Per-point failures mark their rows and the sweep continues.
// Progress goes to `progress` when non-null (one line per grid point).
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* progress = nullptr);

// CSV with the fixed header
//   sweep_var,sweep_value,slot,group,case,scheme,mode,p_analytic,p_mc,ci_half,diag
// and JSON as an array of row objects. Numbers carry 10 significant digits.
void write_csv(const ExperimentResult& result, std::ostream& os);
void write_json(const ExperimentResult& result, std::ostream& os);
ExperimentResult read_json(std::istream& is);

// format is "csv" or "json"; path "-" writes to stdout.
void write_results(const ExperimentResult& result, const std::string& format,
                   const std::string& path);

}  // namespace nbrach::experiment
