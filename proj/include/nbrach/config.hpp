#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nbrach {

// Group-2 outer boundary model: fixed radius D2, or the Voronoi cell extent.
enum class CoverageCase : std::uint8_t { Case1, Case2 };

enum class Scheme : std::uint8_t { Baseline, Acb, Bo, AcbBo };

std::string to_string(CoverageCase c);
std::string to_string(Scheme s);

// Physical and deployment parameters, strict SI units.
struct NetworkConfig {
    double lambda_b = 0.1e-6;    // BS density (per m^2)
    double lambda_d = 10e-6;     // device density (per m^2)
    double area_radius = 25231.33;  // simulation disc radius (m), ~2000 km^2
    double alpha = 4.0;          // path-loss exponent
    double p_dl = 3.16227766016838;    // DL transmit power (W), 35 dBm
    double omega = 2.95120922666639e-17;  // DL noise power (W), -135.3 dBm
    double delta1 = 3162.27766016838;  // DL SNR threshold, group 0 (linear, 35 dB)
    double delta2 = 1000.0;      // DL SNR threshold, group 1 (linear, 30 dB)
    double rho = 1e-15;          // UL power-control target (W), -120 dBm
    double p_ul = 0.158489319246111;  // fixed UL transmit power, groups 1-2 (W), 22 dBm
    double sigma2 = 2.29086765276777e-15;  // UL noise power (W), -116.4 dBm
    double gamma_th = 10.0;      // SINR threshold (linear, 10 dB)

    // Throws std::invalid_argument naming the offending field(s).
    void validate() const;
};

// Power mode of the single-group comparison network.
enum class SingleGroupPower : std::uint8_t { Control, Fixed };

// CE-group radii, preamble resources and thinning probabilities.
struct CeGroupLayout {
    std::array<double, 3> d{};   // D0 < D1, D2 (m)
    std::array<int, 3> s{12, 12, 24};  // subcarriers per group
    std::array<int, 3> k{2, 4, 16};    // repetition values
    CoverageCase cov_case = CoverageCase::Case2;
    std::array<double, 3> g{};   // thinning probabilities

    // One group spanning (0, D2) with all 48 subcarriers; used by the
    // single-vs-three comparison. Group index 0 carries the whole network.
    bool single_group = false;
    SingleGroupPower single_power = SingleGroupPower::Fixed;

    int num_groups() const { return single_group ? 1 : 3; }
};

// Builds the layout from the config: radii from the DL link budget, thinning
// probabilities from the BS density. Rejects Case1 when D2 <= D1 (empty
// group-2 annulus) with a diagnostic carrying the computed radii.
CeGroupLayout make_layout(const NetworkConfig& cfg, CoverageCase cov_case,
                          std::array<int, 3> s = {12, 12, 24},
                          std::array<int, 3> k = {2, 4, 16});

// Single-group comparison layout: one group on (0, D2), S = 48.
CeGroupLayout make_single_group_layout(const NetworkConfig& cfg, SingleGroupPower power,
                                       int k_single);

// Per-slot traffic and access-control parameters.
struct TrafficConfig {
    double mu_new = 0.1;   // new-packet intensity per slot
    Scheme scheme = Scheme::Baseline;
    double q_acb = 0.6;    // ACB factor
    int t_bo = 2;          // backoff window (slots)
    int horizon = 10;      // number of slots

    void validate() const;
};

// Knobs of the numeric engine (gamma_th itself lives in NetworkConfig).
struct AnalyticParams {
    double c = 3.575;              // Voronoi cell-load PMF constant
    double quad_rel_tol = 1e-8;    // adaptive quadrature relative tolerance
    double series_tail_tol = 1e-8; // stop the interferer sum at PMF mass 1 - tol
    int n_max_cap = 2000;          // hard cap on the interferer-count index

    void validate() const;
};

}  // namespace nbrach
