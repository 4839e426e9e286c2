// Acceptance suite: exercises every criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit status is nonzero if any
// criterion fails.

#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "nbrach/analytic.hpp"
#include "nbrach/experiment.hpp"
#include "nbrach/simulator.hpp"
#include "nbrach/traffic.hpp"
#include "nbrach/units.hpp"
#include "../tests/oracles.hpp"

using namespace nbrach;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

void detail(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    std::printf("    ");
    std::vprintf(fmt, args);
    std::printf("\n");
    va_end(args);
}

const std::array<double, 5> kGammaGridDb{0, 5, 10, 15, 20};

NetworkConfig defaults_2000km2() {
    NetworkConfig cfg;  // Table-II defaults, area 2000 km^2
    return cfg;
}

double analytic_slot1(const NetworkConfig& cfg, const CeGroupLayout& layout, int group,
                      double mu_new, const AnalyticParams& params) {
    analytic::GroupSlotInput in;
    in.group = group;
    in.nonempty = traffic::nonempty_initial(mu_new);
    in.nonrestrict = 1.0;
    in.lambda_a = layout.g[group] * cfg.lambda_d / layout.s[group];
    in.repetitions = layout.k[group];
    return analytic::rach_success_single_slot(in, cfg, layout, params).value;
}

// 1. Analytic-simulation agreement at the documented defaults, slot 1,
//    gamma_th in {0,...,20} dB, Case 2, |analytic - MC| <= max(0.03, CI).
void criterion1() {
    const AnalyticParams params;
    TrafficConfig tc;  // baseline, mu_new = 0.1
    tc.horizon = 1;
    const int trials = 200;
    bool pass = true;
    for (double gdb : kGammaGridDb) {
        NetworkConfig cfg = defaults_2000km2();
        cfg.gamma_th = units::db_to_linear(gdb);
        const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
        const auto mc =
            sim::estimate_success(cfg, layout, tc, 1, trials, 20240001);
        for (int g = 0; g < 3; ++g) {
            const double an = analytic_slot1(cfg, layout, g, tc.mu_new, params);
            const auto& e = mc.rach[0][g];
            const bool defined = e.defined;
            const double allow = std::max(0.03, e.ci_half);
            const bool ok = defined && std::abs(an - e.mean) <= allow;
            detail("gamma=%2.0fdB group %d: analytic=%.5f mc=%.5f (ci=%.5f, n=%llu) diff=%.5f allow=%.5f %s",
                   gdb, g, an, e.mean, e.ci_half, (unsigned long long)e.attempts,
                   std::abs(an - e.mean), allow, ok ? "ok" : "MISS");
            pass = pass && ok;
        }
    }
    report(1, pass, "analytic vs Monte Carlo within max(0.03, CI) on the gamma grid, "
                    "3 groups, Case 2, 200 trials");
}

// 2. Analytic monotonicity in gamma_th and in the device/BS density ratio.
void criterion2() {
    const AnalyticParams params;
    bool pass = true;
    for (int g = 0; g < 3; ++g) {
        double prev = 2.0;
        for (double gdb : kGammaGridDb) {
            NetworkConfig cfg = defaults_2000km2();
            cfg.gamma_th = units::db_to_linear(gdb);
            const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
            const double p = analytic_slot1(cfg, layout, g, 0.1, params);
            if (!(p <= prev + 1e-9)) {
                detail("gamma monotonicity broken: group %d at %.0f dB: %.6g > %.6g", g, gdb, p,
                       prev);
                pass = false;
            }
            prev = p;
        }
    }
    for (int g = 0; g < 3; ++g) {
        double prev = 2.0;
        for (double ratio : {10.0, 50.0, 100.0, 500.0}) {
            NetworkConfig cfg = defaults_2000km2();
            cfg.lambda_d = cfg.lambda_b * ratio;
            const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
            const double p = analytic_slot1(cfg, layout, g, 0.1, params);
            if (!(p <= prev + 1e-9)) {
                detail("density monotonicity broken: group %d at ratio %.0f: %.6g > %.6g", g,
                       ratio, p, prev);
                pass = false;
            }
            prev = p;
        }
    }
    report(2, pass, "analytic success nonincreasing in gamma_th and in lambda_D/lambda_B "
                    "(tolerance 1e-9)");
}

// 3. Doubling the repetition value cannot hurt (theta and P, exact).
//    Base K = (1,4,16) so the doubled set stays within the 3GPP-legal values.
void criterion3() {
    const AnalyticParams params;
    const NetworkConfig cfg = defaults_2000km2();
    bool pass = true;
    for (int g = 0; g < 3; ++g) {
        const std::array<int, 3> base{1, 4, 16};
        const CeGroupLayout lo = make_layout(cfg, CoverageCase::Case2, {12, 12, 24}, base);
        const CeGroupLayout hi = make_layout(cfg, CoverageCase::Case2, {12, 12, 24},
                                             {2 * base[0], 2 * base[1], 2 * base[2]});
        analytic::GroupSlotInput in;
        in.group = g;
        in.nonempty = traffic::nonempty_initial(0.1);
        in.nonrestrict = 1.0;
        in.lambda_a = lo.g[g] * cfg.lambda_d / lo.s[g];
        in.repetitions = lo.k[g];
        const auto theta_lo = analytic::preamble_success(in, cfg, lo, params);
        const auto p_lo = analytic::rach_success_single_slot(in, cfg, lo, params);
        in.repetitions = hi.k[g];
        const auto theta_hi = analytic::preamble_success(in, cfg, hi, params);
        const auto p_hi = analytic::rach_success_single_slot(in, cfg, hi, params);
        const bool ok = theta_hi.value >= theta_lo.value && p_hi.value >= p_lo.value;
        detail("group %d: K %d->%d theta %.6g -> %.6g, P %.6g -> %.6g %s", g, lo.k[g], hi.k[g],
               theta_lo.value, theta_hi.value, p_lo.value, p_hi.value, ok ? "ok" : "MISS");
        pass = pass && ok;
    }
    report(3, pass, "doubling repetitions never lowers analytic theta or P (exact)");
}

// 4. Scheme ordering ACB&BO >= BO >= ACB >= Baseline, slots 2..10 analytic
//    (tolerance 1e-6) and MC at slot 5 within overlapping CIs.
void criterion4() {
    const AnalyticParams params;
    const NetworkConfig cfg = defaults_2000km2();
    const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
    const std::array<Scheme, 4> order{Scheme::AcbBo, Scheme::Bo, Scheme::Acb, Scheme::Baseline};
    bool pass = true;

    std::array<traffic::QueueTrace, 4> traces;
    for (std::size_t i = 0; i < order.size(); ++i) {
        TrafficConfig tc;
        tc.scheme = order[i];
        tc.horizon = 10;
        traces[i] = traffic::run_multislot(cfg, layout, tc, params);
    }
    for (int g = 0; g < 3; ++g) {
        for (int t = 2; t <= 10; ++t) {
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const double a = traces[i].per_group[g].success[t - 1];
                const double b = traces[i + 1].per_group[g].success[t - 1];
                if (!(a >= b - 1e-6)) {
                    detail("analytic ordering broken: group %d slot %d: %s=%.8g < %s=%.8g", g, t,
                           to_string(order[i]).c_str(), a, to_string(order[i + 1]).c_str(), b);
                    pass = false;
                }
            }
        }
    }

    std::array<sim::McResult, 4> mc;
    for (std::size_t i = 0; i < order.size(); ++i) {
        TrafficConfig tc;
        tc.scheme = order[i];
        tc.horizon = 5;
        mc[i] = sim::estimate_success(cfg, layout, tc, 5, 60, 20240004);
    }
    for (int g = 0; g < 3; ++g) {
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const auto& a = mc[i].rach[4][g];
            const auto& b = mc[i + 1].rach[4][g];
            if (!a.defined || !b.defined) continue;  // empty groups cannot order
            const bool ok = a.mean + a.ci_half >= b.mean - b.ci_half;
            if (!ok) {
                detail("MC ordering broken at slot 5: group %d: %s=%.5f+-%.5f < %s=%.5f+-%.5f",
                       g, to_string(order[i]).c_str(), a.mean, a.ci_half,
                       to_string(order[i + 1]).c_str(), b.mean, b.ci_half);
                pass = false;
            }
        }
    }
    report(4, pass, "ACB&BO >= BO >= ACB >= Baseline analytically (slots 2-10, 1e-6) and in "
                    "MC at slot 5 within CIs");
}

// 5. ACB sweep: analytic P at slot 5 nondecreasing in 1 - Q_ACB.
void criterion5() {
    const AnalyticParams params;
    const NetworkConfig cfg = defaults_2000km2();
    const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
    bool pass = true;
    for (int g = 0; g < 3; ++g) {
        double prev = 2.0;
        for (double q : {1.0, 0.8, 0.6, 0.4, 0.2}) {  // ascending 1-Q
            TrafficConfig tc;
            tc.scheme = Scheme::Acb;
            tc.q_acb = q;
            tc.horizon = 5;
            const auto trace = traffic::run_multislot(cfg, layout, tc, params);
            const double p = trace.per_group[g].success[4];
            if (!(p + 1e-9 >= prev)) {
                // nondecreasing in 1-Q means each new value may not drop
                detail("ACB sweep broken: group %d at Q=%.1f: %.8g < %.8g", g, q, p, prev);
                pass = false;
            }
            prev = p;
        }
    }
    report(5, pass, "analytic P at slot 5 nondecreasing in 1-Q_ACB over {1.0,...,0.2}");
}

// 6. Oracle equivalences.
void criterion6() {
    const AnalyticParams params;
    bool pass = true;

    // (a) pmf normalization and pooled TV distance against the empirical
    //     contender histogram at the documented defaults
    for (double mu : {0.0, 0.1, 1.0, 10.0, 100.0}) {
        double sum = 0.0;
        for (int n = 0; n < 4000; ++n) sum += analytic::interferer_count_pmf(n, mu, params.c);
        if (std::abs(sum - 1.0) > 1e-9) {
            detail("pmf normalization off at mu=%g: |sum-1|=%.3g", mu, std::abs(sum - 1.0));
            pass = false;
        }
    }
    {
        const NetworkConfig cfg = defaults_2000km2();
        const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
        const double activity = traffic::nonempty_initial(0.1);
        const auto h = sim::empirical_interferer_pmf(cfg, layout, activity, 30, 20240006);
        double tv = 0.0;
        for (std::size_t n = 0; n < std::max<std::size_t>(h.pooled.size(), 256); ++n) {
            double mix = 0.0;
            for (int g = 0; g < 3; ++g) {
                const double mu =
                    activity * layout.g[g] * cfg.lambda_d / layout.s[g] / cfg.lambda_b;
                mix += layout.g[g] *
                       analytic::interferer_count_pmf(static_cast<int>(n), mu, params.c);
            }
            tv += std::abs((n < h.pooled.size() ? h.pooled[n] : 0.0) - mix);
        }
        tv /= 2.0;
        detail("pooled contender-histogram TV distance = %.4f (limit 0.05)", tv);
        for (int g = 0; g < 3; ++g) {
            const double mu = activity * layout.g[g] * cfg.lambda_d / layout.s[g] / cfg.lambda_b;
            double tvg = 0.0;
            for (std::size_t n = 0; n < std::max<std::size_t>(h.per_group[g].size(), 256); ++n)
                tvg += std::abs((n < h.per_group[g].size() ? h.per_group[g][n] : 0.0) -
                                analytic::interferer_count_pmf(static_cast<int>(n), mu, params.c));
            detail("  informative per-group TV: group %d = %.4f", g, tvg / 2.0);
        }
        if (tv > 0.05) pass = false;
    }

    // (b) adaptive quadrature vs the million-panel Riemann oracle on 10
    //     pinned points, 1e-6 relative
    {
        struct F0Point {
            double gdb;
            int l;
            double alpha;
            double y_hi;
        };
        const F0Point f0_points[] = {
            {0, 4, 4.0, 5e4}, {5, 8, 4.0, 5e4}, {10, 4, 4.0, 5e4},
            {10, 8, 4.0, 5e4}, {15, 16, 4.0, 1e5},
        };
        for (const auto& pt : f0_points) {
            const double gamma = units::db_to_linear(pt.gdb);
            double tail = 0.0;
            const double ref = oracles::riemann_F0(gamma, pt.l, pt.alpha, pt.y_hi, 1000000, &tail);
            const double got = analytic::calF0(gamma, pt.l, pt.alpha);
            const double rel = std::abs(got - ref) / ref;
            if (tail > 1e-7 * ref || rel > 1e-6) {
                detail("F0(%g dB, l=%d) oracle mismatch: rel=%.2e tail=%.2e", pt.gdb, pt.l, rel,
                       tail / ref);
                pass = false;
            }
        }
        struct FiPoint {
            double gdb;
            int l;
            double alpha;
            double r;
            double d;
            double y_hi;
        };
        const FiPoint fi_points[] = {
            {10, 16, 4.0, 1000, 1000, 2e7},  {5, 4, 3.5, 500, 800, 4e7},
            {0, 4, 4.0, 2500, 3218, 2e7},    {10, 8, 4.0, 3000, 3218, 1e8},
            {15, 64, 4.0, 1784, 3218, 2e8},
        };
        for (const auto& pt : fi_points) {
            const double gamma = units::db_to_linear(pt.gdb);
            double tail = 0.0;
            const double ref =
                oracles::riemann_Fi(gamma, pt.l, pt.alpha, pt.r, pt.d, pt.y_hi, 1000000, &tail);
            const double got = analytic::calFi(gamma, pt.l, pt.alpha, pt.r, pt.d);
            const double rel = std::abs(got - ref) / ref;
            if (tail > 1e-7 * ref || rel > 1e-6) {
                detail("Fi(%g dB, l=%d, a=%g, r=%g, d=%g) oracle mismatch: rel=%.2e tail=%.2e",
                       pt.gdb, pt.l, pt.alpha, pt.r, pt.d, rel, tail / ref);
                pass = false;
            }
        }
    }

    // (c) noise-only MC vs the lambda_a = 0 closed form, single-cell
    //     geometry so the distance model is exact, >= 1e4 attempts
    {
        NetworkConfig cfg;
        cfg.sigma2 = 2.95120922666639e-17;
        cfg.gamma_th = units::db_to_linear(15.0);
        cfg.lambda_d = 1.2e-4;
        const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
        cfg.area_radius = layout.d[1];
        TrafficConfig tc;
        tc.mu_new = 5.0;
        sim::SimOptions opts;
        opts.interference = false;
        std::array<std::uint64_t, 2> attempts{}, received{};
        for (std::uint64_t trial = 0; trial < 3; ++trial) {
            auto dep =
                geometry::sample_deployment_fixed_bs(cfg, layout, {{0.0, 0.0}}, 600 + trial);
            sim::TrialSim sim_one(cfg, layout, tc, std::move(dep), rng::Key(700 + trial), opts);
            for (int t = 1; t <= 2; ++t) {
                const auto out = sim_one.run_slot(t);
                for (int g = 0; g < 2; ++g) {
                    attempts[g] += out.group[g].attempts;
                    received[g] += out.group[g].preamble_success;
                }
            }
        }
        for (int g = 0; g < 2; ++g) {
            analytic::GroupSlotInput in;
            in.group = g;
            in.lambda_a = 0.0;
            in.repetitions = layout.k[g];
            const double an = analytic::preamble_success(in, cfg, layout, params).value;
            const double mc =
                static_cast<double>(received[g]) / static_cast<double>(attempts[g]);
            const double ci = sim::wilson_half_width(received[g], attempts[g]);
            const bool ok = attempts[g] >= 10000 && std::abs(mc - an) <= ci;
            detail("noise-only group %d: analytic=%.5f mc=%.5f ci=%.5f attempts=%llu %s", g, an,
                   mc, ci, (unsigned long long)attempts[g], ok ? "ok" : "MISS");
            pass = pass && ok;
        }
    }

    // (d) scheme-equivalence traces identical to 1e-12
    {
        NetworkConfig cfg = defaults_2000km2();
        cfg.sigma2 = 2.95120922666639e-17;  // nondegenerate success levels
        const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
        auto run = [&](Scheme s, double q, int t_bo) {
            TrafficConfig tc;
            tc.scheme = s;
            tc.q_acb = q;
            tc.t_bo = t_bo;
            tc.horizon = 8;
            return traffic::run_multislot(cfg, layout, tc, params);
        };
        const auto bl = run(Scheme::Baseline, 0.6, 2);
        const auto acb1 = run(Scheme::Acb, 1.0, 2);
        const auto bo0 = run(Scheme::Bo, 0.6, 0);
        const auto bo = run(Scheme::Bo, 0.6, 2);
        const auto acbbo1 = run(Scheme::AcbBo, 1.0, 2);
        double worst = 0.0;
        for (int g = 0; g < 3; ++g) {
            for (int t = 0; t < 8; ++t) {
                worst = std::max(worst, std::abs(acb1.per_group[g].success[t] -
                                                 bl.per_group[g].success[t]));
                worst = std::max(worst, std::abs(bo0.per_group[g].success[t] -
                                                 bl.per_group[g].success[t]));
                worst = std::max(worst, std::abs(acbbo1.per_group[g].success[t] -
                                                 bo.per_group[g].success[t]));
            }
        }
        detail("scheme-equivalence worst trace deviation = %.3g (limit 1e-12)", worst);
        if (worst > 1e-12) pass = false;
    }

    report(6, pass, "oracle equivalences: pmf normalization + TV, Riemann quadrature points, "
                    "noise-only MC, scheme-equivalence traces");
}

// 7. Thinning validation: per-group device fractions over 10 seeds within 3
//    standard errors (across-seed) of g_i.
void criterion7() {
    const NetworkConfig cfg = defaults_2000km2();
    const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
    const int n_seeds = 10;
    std::array<std::vector<double>, 3> frac;
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        const auto dep = geometry::sample_deployment(cfg, layout, seed);
        const double guard = 0.5 * cfg.area_radius;
        std::array<std::uint64_t, 3> count{};
        std::uint64_t total = 0;
        for (std::size_t j = 0; j < dep.devices.size(); ++j) {
            const auto& p = dep.devices[j];
            if (p.x * p.x + p.y * p.y > guard * guard) continue;
            ++total;
            if (dep.group[j] >= 0) ++count[dep.group[j]];
        }
        for (int g = 0; g < 3; ++g)
            frac[g].push_back(static_cast<double>(count[g]) / static_cast<double>(total));
    }
    bool pass = true;
    for (int g = 0; g < 3; ++g) {
        double mean = 0.0;
        for (double f : frac[g]) mean += f;
        mean /= n_seeds;
        double var = 0.0;
        for (double f : frac[g]) var += (f - mean) * (f - mean);
        var /= (n_seeds - 1);
        const double se = std::sqrt(var / n_seeds);
        const bool ok = std::abs(mean - layout.g[g]) <= 3.0 * se;
        detail("group %d: fraction=%.5f g=%.5f dev=%+.5f 3se=%.5f %s", g, mean, layout.g[g],
               mean - layout.g[g], 3.0 * se, ok ? "ok" : "MISS");
        pass = pass && ok;
    }
    report(7, pass, "deployment group fractions within 3 standard errors of the thinning "
                    "probabilities over 10 seeds");
}

// 8. Determinism: identical CSV bytes on rerun and across worker counts.
void criterion8() {
    FullConfig base;
    experiment::ExperimentSpec spec = experiment::make_experiment("fig3_sinr_sweep", base);
    spec.grid = {0.0, 10.0};
    spec.run_sim = true;
    spec.trials = 5;
    spec.master_seed = 20240008;

    auto csv = [&](int threads) {
        spec.threads = threads;
        std::ostringstream os;
        experiment::write_csv(experiment::run_experiment(spec), os);
        return os.str();
    };
    const std::string first = csv(1);
    const std::string rerun = csv(1);
    const std::string parallel = csv(4);
    const bool pass = first == rerun && first == parallel;
    if (first != rerun) detail("rerun with 1 thread differs");
    if (first != parallel) detail("4-thread run differs from 1-thread run");
    report(8, pass, "same seed gives byte-identical CSV on rerun and at 1 vs 4 worker threads");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures ? 1 : 0;
}
