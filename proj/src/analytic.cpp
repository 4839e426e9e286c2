#include "nbrach/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nbrach/numerics.hpp"

namespace nbrach::analytic {

namespace {

// int_{v0}^inf [1 - (1 + gf * v^-alpha)^-l] v dv, mapped onto (0,1] with
// u = v0 / v; the integrand tail ~ l*gf*v^(1-alpha) needs alpha > 2.
double tail_integral(int l, double alpha, double v0, double gf, double rel_tol) {
    if (alpha <= 2.0)
        throw std::domain_error("tail_integral: alpha must be > 2, integral diverges");
    if (l < 1) throw std::domain_error("tail_integral: l must be >= 1");
    if (gf <= 0.0) return 0.0;
    const double ld = static_cast<double>(l);
    auto f = [&](double u) {
        const double v = v0 / u;
        // 1 - (1 + x)^-l without cancellation for small x
        const double x = gf * std::pow(v, -alpha);
        const double w = -std::expm1(-ld * std::log1p(x));
        return w / (u * u * u);
    };
    return v0 * v0 * numerics::integrate(f, 0.0, 1.0, rel_tol);
}

double binomial_coefficient(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - i + 1) / static_cast<double>(i);
    return c;
}

// Consistency check for the alternating inclusion-exclusion sum. The
// attainable accuracy degrades with the largest term (cancellation), so the
// slack scales with it; values inside the slack clamp to [0,1].
double check_and_clamp(const numerics::CompensatedSum& sum, double quad_rel_tol,
                       const char* what) {
    const double v = sum.value();
    const double eps = std::max(1e-9, 10.0 * sum.max_abs_term() * (quad_rel_tol + 1e-15));
    if (v < -eps || v > 1.0 + eps) {
        throw std::runtime_error(std::string(what) + ": alternating sum " + std::to_string(v) +
                                 " outside [0,1] beyond numerical slack " + std::to_string(eps));
    }
    return std::min(1.0, std::max(0.0, v));
}

}  // namespace

double power_moment(double rho, double p_ul, double alpha, double lambda_b) {
    if (rho <= 0.0 || p_ul <= 0.0 || lambda_b <= 0.0)
        throw std::domain_error("power_moment: rho, p_ul, lambda_b must be > 0");
    if (p_ul < rho)
        throw std::domain_error("power_moment: requires p_ul >= rho (truncation radius)");
    if (alpha <= 2.0) throw std::domain_error("power_moment: alpha must be > 2");
    const double u = M_PI * lambda_b * std::pow(p_ul / rho, 2.0 / alpha);
    return std::pow(rho, 2.0 / alpha) * numerics::lower_incomplete_gamma(2.0, u) /
           (M_PI * lambda_b * -std::expm1(-u));
}

double calF0(double gamma_th, int l0, double alpha, double rel_tol) {
    if (gamma_th <= 0.0) return 0.0;  // lower limit runs off to infinity
    return tail_integral(l0, alpha, std::pow(gamma_th, -1.0 / alpha), 1.0, rel_tol);
}

double calFi(double gamma_th, int l, double alpha, double r, double d_lower, double rel_tol) {
    if (r <= 0.0) return 0.0;
    if (d_lower <= 0.0) throw std::domain_error("calFi: d_lower must be > 0");
    return r * r * tail_integral(l, alpha, d_lower / r, gamma_th, rel_tol);
}

double interferer_count_pmf(int n, double mu, double c) {
    if (n < 0) throw std::domain_error("interferer_count_pmf: n must be >= 0");
    if (mu < 0.0) throw std::domain_error("interferer_count_pmf: mu must be >= 0");
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    const double lp = (c + 1.0) * std::log(c) + std::lgamma(nd + c + 1.0) - std::lgamma(c + 1.0) -
                      std::lgamma(nd + 1.0) + nd * std::log(mu) -
                      (nd + c + 1.0) * std::log(mu + c);
    return std::exp(lp);
}

ThetaResult preamble_success_group0(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const AnalyticParams& params) {
    const double ar = in.nonempty * in.nonrestrict;
    const double u = M_PI * cfg.lambda_b * std::pow(cfg.p_ul / cfg.rho, 2.0 / cfg.alpha);
    // 2 gamma^(2/a) A R lambda_a ligamma(2,u) / (lambda_b (1 - e^-u)); equals
    // 2 pi A R lambda_a (gamma/rho)^(2/a) E[P^(2/a)].
    const double interference_scale =
        2.0 * std::pow(cfg.gamma_th, 2.0 / cfg.alpha) * ar * in.lambda_a *
        numerics::lower_incomplete_gamma(2.0, u) / (cfg.lambda_b * -std::expm1(-u));

    numerics::CompensatedSum sum;
    double sign = 1.0;
    for (int k = 1; k <= in.repetitions; ++k, sign = -sign) {
        const int l = 4 * k;
        const double noise_exp = static_cast<double>(l) * cfg.gamma_th * cfg.sigma2 / cfg.rho;
        const double f0 = calF0(cfg.gamma_th, l, cfg.alpha, params.quad_rel_tol * 0.01);
        sum.add(sign * binomial_coefficient(in.repetitions, k) *
                std::exp(-noise_exp - interference_scale * f0));
    }
    return {check_and_clamp(sum, params.quad_rel_tol, "preamble_success_group0"),
            sum.cancellation_ratio()};
}

ThetaResult preamble_success_groupi(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const CeGroupLayout& layout, const AnalyticParams& params,
                                    ExclusionBound bound) {
    const int group = in.group;
    const bool case2_tail = !layout.single_group && group == 2 &&
                            layout.cov_case == CoverageCase::Case2;
    const double ar = in.nonempty * in.nonrestrict;
    const double inner_tol = params.quad_rel_tol * 0.01;

    double r_lo, r_hi, d_excl;
    if (layout.single_group) {
        r_lo = 0.0;
        r_hi = layout.d[2];
        d_excl = layout.d[2];
    } else {
        if (group < 1 || group > 2)
            throw std::invalid_argument("preamble_success_groupi: group must be 1 or 2");
        r_lo = layout.d[group - 1];
        r_hi = case2_tail ? 0.0 : layout.d[group];
        d_excl = case2_tail ? layout.d[1] : layout.d[group];
    }
    if (bound == ExclusionBound::GroupInnerRadius) d_excl = std::max(r_lo, 1e-6);

    numerics::CompensatedSum sum;
    double sign = 1.0;
    for (int k = 1; k <= in.repetitions; ++k, sign = -sign) {
        const int l = 4 * k;
        const double ld = static_cast<double>(l);
        auto joint = [&](double r) {
            const double noise_exp =
                ld * cfg.gamma_th * cfg.sigma2 * std::pow(r, cfg.alpha) / cfg.p_ul;
            const double fi = calFi(cfg.gamma_th, l, cfg.alpha, r, d_excl, inner_tol);
            return std::exp(-noise_exp - 2.0 * M_PI * ar * in.lambda_a * fi);
        };
        double integral;
        if (case2_tail) {
            // Serving distance beyond D1 with the Rayleigh tail density; the
            // substitution t = exp(-lambda_b pi (r^2 - D1^2)) absorbs the
            // density and maps [D1, inf) onto (0, 1].
            const double d1 = layout.d[1];
            auto f = [&](double t) {
                const double r = std::sqrt(d1 * d1 - std::log(t) / (cfg.lambda_b * M_PI));
                return joint(r);
            };
            integral = numerics::integrate(f, 0.0, 1.0, params.quad_rel_tol);
        } else {
            const double norm = r_hi * r_hi - r_lo * r_lo;
            auto f = [&](double r) { return joint(r) * 2.0 * r / norm; };
            integral = numerics::integrate(f, r_lo, r_hi, params.quad_rel_tol);
        }
        sum.add(sign * binomial_coefficient(in.repetitions, k) * integral);
    }
    return {check_and_clamp(sum, params.quad_rel_tol, "preamble_success_groupi"),
            sum.cancellation_ratio()};
}

ThetaResult preamble_success(const GroupSlotInput& in, const NetworkConfig& cfg,
                             const CeGroupLayout& layout, const AnalyticParams& params) {
    if (layout.single_group) {
        return layout.single_power == SingleGroupPower::Control
                   ? preamble_success_group0(in, cfg, params)
                   : preamble_success_groupi(in, cfg, layout, params);
    }
    return in.group == 0 ? preamble_success_group0(in, cfg, params)
                         : preamble_success_groupi(in, cfg, layout, params);
}

RachResult rach_success_single_slot(const GroupSlotInput& in, const NetworkConfig& cfg,
                                    const CeGroupLayout& layout, const AnalyticParams& params) {
    const ThetaResult theta = preamble_success(in, cfg, layout, params);
    const double mu = in.nonempty * in.nonrestrict * in.lambda_a / cfg.lambda_b;
    const double c = params.c;

    RachResult out;
    out.theta = theta.value;
    out.cancellation = theta.cancellation;

    // pmf(n) by the stable positive recurrence; equals the log-space form.
    double pmf = std::pow(c / (mu + c), c + 1.0);
    const double ratio_base = mu / (mu + c);
    double collide = 1.0;  // (1 - theta)^n
    double cum = 0.0;
    double acc = 0.0;
    int n = 0;
    while (true) {
        acc += pmf * theta.value * collide;
        cum += pmf;
        ++n;
        if (cum >= 1.0 - params.series_tail_tol || n > params.n_max_cap) break;
        pmf *= (static_cast<double>(n) + c) / static_cast<double>(n) * ratio_base;
        collide *= 1.0 - theta.value;
    }
    out.value = std::min(1.0, acc);
    out.tail_mass = std::max(0.0, 1.0 - cum);
    out.terms = n;
    out.truncated = out.tail_mass > params.series_tail_tol;
    return out;
}

}  // namespace nbrach::analytic
