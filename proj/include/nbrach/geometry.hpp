#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nbrach/config.hpp"

namespace nbrach::geometry {

struct Radii {
    double d0;  // outer radius of CE group 0 (m)
    double d1;  // outer radius of CE group 1 (m)
    double d2;  // fixed outer radius of CE group 2 under Case1 (m)
};

// CE-group boundaries from the downlink link budget and the BS density:
//   D0 = (delta1 * omega / P_DL)^(-1/alpha)
//   D1 = (delta2 * omega / P_DL)^(-1/alpha)
//   D2 = 1 / sqrt(pi * lambda_B)
// Returned regardless of ordering; layout construction validates it.
Radii compute_radii(const NetworkConfig& cfg);

// Thinning probabilities g_i = P(device lands in group i): the nearest-BS
// distance is Rayleigh, so g_i telescopes over exp(-lambda_B pi D^2) terms.
// Case1 requires d1 < d2, otherwise g2 would be negative.
std::array<double, 3> thinning_probabilities(const NetworkConfig& cfg, double d0, double d1,
                                             double d2, CoverageCase cov_case);

// Density of devices contending on one specific preamble of a group.
double effective_density(double lambda_i, int s_i);

struct Point {
    double x;
    double y;
};

// Sampled PPP realization with nearest-BS association and group labels.
// group[j] == -1 marks a device outside every CE group (beyond D2 in Case1).
struct Deployment {
    std::vector<Point> bs;
    std::vector<Point> devices;
    std::vector<std::int32_t> assoc;   // per device: index of nearest BS
    std::vector<std::int8_t> group;    // per device: 0/1/2 or -1
    std::vector<double> dist;          // per device: distance to serving BS (m)
};

// Group label for a device at distance `dist` from its serving BS.
std::int8_t classify_distance(double dist, const CeGroupLayout& layout);

// Samples BS and device PPPs on the disc of cfg.area_radius, associates each
// device with its nearest BS and labels groups. Deterministic in `seed`.
// Realizations with zero BSs are redrawn up to max_retries, then rejected.
Deployment sample_deployment(const NetworkConfig& cfg, const CeGroupLayout& layout,
                             std::uint64_t seed, int max_retries = 16);

// Same, but with caller-supplied BS positions (single-cell tests).
Deployment sample_deployment_fixed_bs(const NetworkConfig& cfg, const CeGroupLayout& layout,
                                      std::vector<Point> bs_points, std::uint64_t seed);

// Serving-distance density of a randomly chosen device of a group, as the
// analytic model assumes it: uniform over the group's annulus, except group 2
// under Case2 where the outer boundary is the Voronoi extent and the density
// is the conditional Rayleigh tail beyond D1.
struct DistancePdf {
    double lo;                            // support lower bound (m)
    double hi;                            // support upper bound; +inf for Case2 group 2
    std::function<double(double)> pdf;
};

DistancePdf distance_pdf(const NetworkConfig& cfg, const CeGroupLayout& layout, int group);

}  // namespace nbrach::geometry
