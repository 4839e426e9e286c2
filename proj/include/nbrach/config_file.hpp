#pragma once

#include <string>
#include <vector>

#include "nbrach/config.hpp"
#include "nbrach/simulator.hpp"

namespace nbrach {

// Everything a run needs, as read from a key-value config file.
struct FullConfig {
    NetworkConfig net;
    std::array<int, 3> s{12, 12, 24};
    std::array<int, 3> k{2, 4, 16};
    CoverageCase cov_case = CoverageCase::Case2;
    bool single_group = false;
    SingleGroupPower single_power = SingleGroupPower::Fixed;
    int single_k = 4;
    TrafficConfig traffic;
    AnalyticParams params;
    sim::SimOptions sim_opts;
    std::string sweep_var;       // custom experiments only
    std::vector<double> sweep_grid;
};

// Parses `key = value [unit]` lines ('#' comments). Dimensioned keys require
// one of their documented unit tokens; unknown keys are rejected with the key
// name. Returns the fully validated configuration (Table-II defaults apply
// to anything omitted).
FullConfig parse_config_text(const std::string& text);
FullConfig parse_config_file(const std::string& path);

// Layout construction for a parsed config (throws on Case1 infeasibility
// with the computed radii in the message).
CeGroupLayout build_layout(const FullConfig& fc);

// Documented key reference for --help and the README.
std::string config_key_reference();

}  // namespace nbrach
