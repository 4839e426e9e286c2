#include "nbrach/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nbrach/geometry.hpp"

namespace nbrach {

std::string to_string(CoverageCase c) { return c == CoverageCase::Case1 ? "case1" : "case2"; }

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Baseline: return "baseline";
        case Scheme::Acb: return "acb";
        case Scheme::Bo: return "bo";
        case Scheme::AcbBo: return "acb_bo";
    }
    return "?";
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool legal_k0(int k) { return k == 1 || k == 2; }
bool legal_k12(int k) {
    return k == 4 || k == 8 || k == 16 || k == 32 || k == 64 || k == 128;
}
bool legal_s(int s) { return s == 12 || s == 24 || s == 48; }

}  // namespace

void NetworkConfig::validate() const {
    require(lambda_b > 0, "lambda_b must be > 0");
    require(lambda_d > 0, "lambda_d must be > 0");
    require(area_radius > 0, "area_radius must be > 0");
    require(alpha > 2, "alpha must be > 2 (interference integrals diverge otherwise)");
    require(p_dl > 0, "p_dl must be > 0");
    require(omega > 0, "omega must be > 0");
    require(delta1 > 0 && delta2 > 0, "delta1, delta2 must be > 0");
    require(delta1 > delta2, "delta1 must exceed delta2 (group 0 needs the higher DL SNR)");
    require(rho > 0, "rho must be > 0");
    require(p_ul > 0, "p_ul must be > 0");
    require(sigma2 > 0, "sigma2 must be > 0");
    require(gamma_th > 0, "gamma_th must be > 0");
}

void TrafficConfig::validate() const {
    require(mu_new >= 0, "mu_new must be >= 0");
    require(q_acb >= 0 && q_acb <= 1, "q_acb must be in [0,1]");
    require(t_bo >= 0, "t_bo must be >= 0");
    require(horizon >= 1, "horizon must be >= 1");
}

void AnalyticParams::validate() const {
    require(c > 0, "c must be > 0");
    require(quad_rel_tol > 0 && quad_rel_tol < 1, "quad_rel_tol must be in (0,1)");
    require(series_tail_tol > 0 && series_tail_tol < 1, "series_tail_tol must be in (0,1)");
    require(n_max_cap >= 1, "n_max_cap must be >= 1");
}

CeGroupLayout make_layout(const NetworkConfig& cfg, CoverageCase cov_case,
                          std::array<int, 3> s, std::array<int, 3> k) {
    cfg.validate();
    const auto radii = geometry::compute_radii(cfg);
    CeGroupLayout layout;
    layout.d = {radii.d0, radii.d1, radii.d2};
    layout.s = s;
    layout.k = k;
    layout.cov_case = cov_case;

    require(radii.d0 < radii.d1, "layout: D0 < D1 violated");
    if (cov_case == CoverageCase::Case1 && !(radii.d1 < radii.d2)) {
        throw std::invalid_argument(
            "layout: Case1 infeasible for this config: D2 = " + std::to_string(radii.d2) +
            " m <= D1 = " + std::to_string(radii.d1) +
            " m (group-2 annulus empty); use Case2 or change lambda_b/delta2");
    }
    for (int i = 0; i < 3; ++i)
        require(legal_s(s[i]), "layout: S[" + std::to_string(i) + "] must be one of {12,24,48}");
    require(s[0] + s[1] + s[2] <= 48, "layout: sum of subcarriers must be <= 48");
    require(legal_k0(k[0]), "layout: K0 must be in {1,2}");
    require(legal_k12(k[1]), "layout: K1 must be in {4,8,16,32,64,128}");
    require(legal_k12(k[2]), "layout: K2 must be in {4,8,16,32,64,128}");
    require(k[0] < k[1] && k[1] < k[2], "layout: K0 < K1 < K2 required");

    layout.g = geometry::thinning_probabilities(cfg, radii.d0, radii.d1, radii.d2, cov_case);
    return layout;
}

CeGroupLayout make_single_group_layout(const NetworkConfig& cfg, SingleGroupPower power,
                                       int k_single) {
    cfg.validate();
    require(k_single >= 1 && k_single <= 128, "single-group K must be in [1,128]");
    const auto radii = geometry::compute_radii(cfg);
    CeGroupLayout layout;
    layout.single_group = true;
    layout.single_power = power;
    layout.d = {radii.d0, radii.d1, radii.d2};
    layout.s = {48, 0, 0};
    layout.k = {k_single, 0, 0};
    layout.cov_case = CoverageCase::Case1;  // fixed outer radius D2
    // All devices within D2 of a BS form the one group.
    layout.g = {1.0 - std::exp(-cfg.lambda_b * M_PI * radii.d2 * radii.d2), 0.0, 0.0};
    return layout;
}

}  // namespace nbrach
