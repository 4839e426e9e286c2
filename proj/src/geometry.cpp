#include "nbrach/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nbrach/rng.hpp"

namespace nbrach::geometry {

Radii compute_radii(const NetworkConfig& cfg) {
    const double d0 = std::pow(cfg.delta1 * cfg.omega / cfg.p_dl, -1.0 / cfg.alpha);
    const double d1 = std::pow(cfg.delta2 * cfg.omega / cfg.p_dl, -1.0 / cfg.alpha);
    const double d2 = 1.0 / std::sqrt(M_PI * cfg.lambda_b);
    return {d0, d1, d2};
}

std::array<double, 3> thinning_probabilities(const NetworkConfig& cfg, double d0, double d1,
                                             double d2, CoverageCase cov_case) {
    if (!(d0 < d1)) {
        throw std::invalid_argument("thinning_probabilities: requires d0 < d1, got d0=" +
                                    std::to_string(d0) + " d1=" + std::to_string(d1));
    }
    const double e0 = std::exp(-cfg.lambda_b * M_PI * d0 * d0);
    const double e1 = std::exp(-cfg.lambda_b * M_PI * d1 * d1);
    std::array<double, 3> g{1.0 - e0, e0 - e1, 0.0};
    if (cov_case == CoverageCase::Case1) {
        if (!(d1 < d2)) {
            throw std::invalid_argument(
                "thinning_probabilities: Case1 needs d1 < d2 (group-2 annulus), got d1=" +
                std::to_string(d1) + " d2=" + std::to_string(d2));
        }
        g[2] = e1 - std::exp(-cfg.lambda_b * M_PI * d2 * d2);
    } else {
        g[2] = e1;
    }
    return g;
}

double effective_density(double lambda_i, int s_i) {
    if (s_i < 1) throw std::invalid_argument("effective_density: s_i must be >= 1");
    return lambda_i / static_cast<double>(s_i);
}

std::int8_t classify_distance(double dist, const CeGroupLayout& layout) {
    if (layout.single_group) {
        return dist <= layout.d[2] ? std::int8_t{0} : std::int8_t{-1};
    }
    if (dist <= layout.d[0]) return 0;
    if (dist <= layout.d[1]) return 1;
    if (layout.cov_case == CoverageCase::Case2) return 2;
    return dist <= layout.d[2] ? std::int8_t{2} : std::int8_t{-1};
}

namespace {

// Uniform point on the disc of radius R (inverse-CDF in the radius).
Point disc_point(rng::Stream& s, double radius) {
    const double r = radius * std::sqrt(s.u01());
    const double phi = 2.0 * M_PI * s.u01();
    return {r * std::cos(phi), r * std::sin(phi)};
}

void associate_and_label(const NetworkConfig& cfg, const CeGroupLayout& layout,
                         Deployment& dep) {
    (void)cfg;
    const std::size_t nd = dep.devices.size();
    dep.assoc.resize(nd);
    dep.group.resize(nd);
    dep.dist.resize(nd);
    for (std::size_t j = 0; j < nd; ++j) {
        double best = std::numeric_limits<double>::infinity();
        std::int32_t arg = -1;
        for (std::size_t b = 0; b < dep.bs.size(); ++b) {
            const double dx = dep.devices[j].x - dep.bs[b].x;
            const double dy = dep.devices[j].y - dep.bs[b].y;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best) {
                best = d2;
                arg = static_cast<std::int32_t>(b);
            }
        }
        dep.assoc[j] = arg;
        dep.dist[j] = std::sqrt(best);
        dep.group[j] = classify_distance(dep.dist[j], layout);
    }
}

}  // namespace

Deployment sample_deployment(const NetworkConfig& cfg, const CeGroupLayout& layout,
                             std::uint64_t seed, int max_retries) {
    const double area = M_PI * cfg.area_radius * cfg.area_radius;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        rng::Stream s(rng::Key(seed).with(0x6465706cULL, static_cast<std::uint64_t>(attempt)));
        const std::uint64_t n_bs = s.poisson(cfg.lambda_b * area);
        if (n_bs == 0) continue;
        Deployment dep;
        dep.bs.reserve(n_bs);
        for (std::uint64_t i = 0; i < n_bs; ++i) dep.bs.push_back(disc_point(s, cfg.area_radius));
        const std::uint64_t n_dev = s.poisson(cfg.lambda_d * area);
        dep.devices.reserve(n_dev);
        for (std::uint64_t i = 0; i < n_dev; ++i)
            dep.devices.push_back(disc_point(s, cfg.area_radius));
        associate_and_label(cfg, layout, dep);
        return dep;
    }
    throw std::runtime_error("sample_deployment: zero BSs after " +
                             std::to_string(max_retries + 1) + " attempts; lambda_b*area too small");
}

Deployment sample_deployment_fixed_bs(const NetworkConfig& cfg, const CeGroupLayout& layout,
                                      std::vector<Point> bs_points, std::uint64_t seed) {
    if (bs_points.empty())
        throw std::invalid_argument("sample_deployment_fixed_bs: need at least one BS");
    rng::Stream s(rng::Key(seed).with(0x66697862ULL));
    Deployment dep;
    dep.bs = std::move(bs_points);
    const double area = M_PI * cfg.area_radius * cfg.area_radius;
    const std::uint64_t n_dev = s.poisson(cfg.lambda_d * area);
    dep.devices.reserve(n_dev);
    for (std::uint64_t i = 0; i < n_dev; ++i) dep.devices.push_back(disc_point(s, cfg.area_radius));
    associate_and_label(cfg, layout, dep);
    return dep;
}

DistancePdf distance_pdf(const NetworkConfig& cfg, const CeGroupLayout& layout, int group) {
    if (group < 0 || group >= layout.num_groups())
        throw std::invalid_argument("distance_pdf: group out of range");
    const double lo = (group == 0 || layout.single_group) ? 0.0 : layout.d[group - 1];
    if (!layout.single_group && group == 2 && layout.cov_case == CoverageCase::Case2) {
        const double d1 = layout.d[1];
        const double lb = cfg.lambda_b;
        return {d1, std::numeric_limits<double>::infinity(),
                [lb, d1](double r) {
                    return 2.0 * M_PI * lb * r * std::exp(-lb * M_PI * (r * r - d1 * d1));
                }};
    }
    const double hi = layout.single_group ? layout.d[2] : layout.d[group];
    const double norm = hi * hi - lo * lo;
    return {lo, hi, [norm](double r) { return 2.0 * r / norm; }};
}

}  // namespace nbrach::geometry
