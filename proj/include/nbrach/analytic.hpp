#pragma once

#include "nbrach/config.hpp"

namespace nbrach::analytic {

// Lower bound of the interference-exclusion integral for the fixed-power
// groups, exactly as the closed form states it: the group's own outer
// radius. The alternative reading (the group's inner radius) can be selected
// for sensitivity runs.
enum class ExclusionBound : int { GroupOuterRadius, GroupInnerRadius };
inline constexpr ExclusionBound kExclusionBound = ExclusionBound::GroupOuterRadius;

// Truncated moment of the power-controlled uplink transmit power,
//   E[P^(2/alpha)] = rho^(2/alpha) * ligamma(2, u) / (pi lambda_b (1 - e^-u)),
//   u = pi lambda_b (p_ul / rho)^(2/alpha).
// Requires p_ul > rho so the truncation radius is meaningful.
double power_moment(double rho, double p_ul, double alpha, double lambda_b);

// F0 = int_{gamma_th^(-1/alpha)}^inf [1 - (1 + y^-alpha)^-l0] y dy.
double calF0(double gamma_th, int l0, double alpha, double rel_tol = 1e-10);

// Fi(r) = int_{d_lower}^inf [1 - (1 + gamma_th r^alpha y^-alpha)^-l] y dy,
// evaluated after the substitution y = r v so the quadrature is dimensionless.
// Satisfies the scaling identity Fi(s*r, s*d) = s^2 Fi(r, d).
double calFi(double gamma_th, int l, double alpha, double r, double d_lower,
             double rel_tol = 1e-10);

// PMF of the number of same-preamble in-cell contenders around the typical
// device (Voronoi cell-load approximation, c = 3.575), evaluated in log
// space. mu = A R lambda_a / lambda_b.
double interferer_count_pmf(int n, double mu, double c);

// Per-slot inputs of the single-slot success probability for one CE group.
struct GroupSlotInput {
    int group = 0;          // 0, 1 or 2 (0 also carries the single-group modes)
    double nonempty = 1.0;  // A_i^t
    double nonrestrict = 1.0;  // R_i^t
    double lambda_a = 0.0;  // per-preamble device density (per m^2)
    int repetitions = 1;    // K_i
};

struct ThetaResult {
    double value = 0.0;         // preamble transmission success, clamped to [0,1]
    double cancellation = 0.0;  // max |term| / |sum| of the alternating sum
};

// Preamble transmission success probability of the power-controlled group
// (inclusion-exclusion over repetitions; each joint term couples the noise
// factor with the interference Laplace transform).
ThetaResult preamble_success_group0(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const AnalyticParams& params);

// Fixed-power groups (1 and 2, both cases) and the fixed-power single-group
// network: the joint term is averaged over the serving distance.
ThetaResult preamble_success_groupi(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const CeGroupLayout& layout, const AnalyticParams& params,
                                    ExclusionBound bound = kExclusionBound);

// Dispatch on group / layout power mode.
ThetaResult preamble_success(const GroupSlotInput& in, const NetworkConfig& cfg,
                             const CeGroupLayout& layout, const AnalyticParams& params);

struct RachResult {
    double value = 0.0;      // RACH success probability
    double theta = 0.0;      // preamble transmission success used inside
    double tail_mass = 0.0;  // contender-count PMF mass beyond the truncation
    int terms = 0;           // series terms evaluated
    bool truncated = false;  // cap reached with tail mass above tolerance
    double cancellation = 0.0;
};

// Single-slot RACH success probability: sum over the contender count n of
// pmf(n) * theta * (1 - theta)^n, truncated once the PMF mass reaches
// 1 - series_tail_tol (hard cap params.n_max_cap).
RachResult rach_success_single_slot(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const CeGroupLayout& layout, const AnalyticParams& params);

}  // namespace nbrach::analytic
