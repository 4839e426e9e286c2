#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "nbrach/traffic.hpp"

using namespace nbrach;
using traffic::GroupHistory;

namespace {

NetworkConfig midrange_config() {
    NetworkConfig cfg;
    cfg.sigma2 = 2.95120922666639e-17;  // -135.3 dBm, keeps P_i^t mid-range
    return cfg;
}

GroupHistory history_of(std::initializer_list<double> a, std::initializer_list<double> r,
                        std::initializer_list<double> p, std::initializer_list<double> mu) {
    GroupHistory h;
    h.nonempty = a;
    h.nonrestrict = r;
    h.success = p;
    h.mu_cum = mu;
    return h;
}

}  // namespace

TEST_CASE("initial non-empty probability") {
    CHECK(traffic::nonempty_initial(0.0) == 0.0);
    CHECK(traffic::nonempty_initial(1e9) == doctest::Approx(1.0));
    CHECK(traffic::nonempty_initial(0.1) == doctest::Approx(0.0951625819640404).epsilon(1e-12));
    CHECK_THROWS_AS(traffic::nonempty_initial(-0.1), std::domain_error);
}

TEST_CASE("baseline step") {
    const auto h = history_of({0.0952}, {1.0}, {0.7}, {0.0});

    SUBCASE("worked example") {
        const auto s = traffic::step_baseline(h, 2, 0.1, 0.839);
        CHECK(s.mu_cum == doctest::Approx(0.1 - 0.839 * 0.7 * 0.0952).epsilon(1e-12));
        CHECK(s.nonrestrict == 1.0);
        CHECK(s.nonempty == doctest::Approx(1.0 - std::exp(-0.1 - s.mu_cum)).epsilon(1e-12));
        CHECK(!s.mu_clamped);
    }
    SUBCASE("nothing departs when P = 0") {
        const auto h0 = history_of({0.5}, {1.0}, {0.0}, {0.3});
        const auto s = traffic::step_baseline(h0, 2, 0.1, 0.839);
        CHECK(s.mu_cum == doctest::Approx(0.1 + 0.3).epsilon(1e-12));
    }
    SUBCASE("balanced departures hold mu_cum stationary") {
        // g P A == mu_new
        const double g = 0.8, p = 0.5, a = 0.25, mu_new = g * p * a;
        const auto hb = history_of({a}, {1.0}, {p}, {0.42});
        const auto s = traffic::step_baseline(hb, 2, mu_new, g);
        CHECK(s.mu_cum == doctest::Approx(0.42).epsilon(1e-12));
    }
    SUBCASE("mu_new = 0 makes mu_cum nonincreasing") {
        GroupHistory hh = history_of({0.6}, {1.0}, {0.4}, {0.9});
        double prev = 0.9;
        for (int t = 2; t <= 6; ++t) {
            const auto s = traffic::step_baseline(hh, t, 0.0, 0.9);
            CHECK(s.mu_cum <= prev + 1e-15);
            prev = s.mu_cum;
            hh.nonempty.push_back(s.nonempty);
            hh.nonrestrict.push_back(1.0);
            hh.success.push_back(0.4);
            hh.mu_cum.push_back(s.mu_cum);
        }
    }
    CHECK_THROWS_AS(traffic::step_baseline(h, 1, 0.1, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(traffic::step_baseline(h, 5, 0.1, 0.8), std::invalid_argument);
}

TEST_CASE("ACB step") {
    const auto h = history_of({0.0952}, {0.6}, {0.7}, {0.0});

    SUBCASE("Q = 1 reproduces baseline") {
        const auto hb = history_of({0.0952}, {1.0}, {0.7}, {0.0});
        const auto a = traffic::step_acb(hb, 2, 0.1, 0.839, 1.0);
        const auto b = traffic::step_baseline(hb, 2, 0.1, 0.839);
        CHECK(a.mu_cum == b.mu_cum);
        CHECK(a.nonempty == b.nonempty);
        CHECK(a.nonrestrict == 1.0);
    }
    SUBCASE("Q = 0 bars everyone") {
        const auto s = traffic::step_acb(h, 2, 0.1, 0.839, 0.0);
        CHECK(s.nonrestrict == 0.0);
        CHECK(s.mu_cum == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("departures scale with Q") {
        const auto s6 = traffic::step_acb(h, 2, 0.1, 0.839, 0.6);
        CHECK(s6.mu_cum == doctest::Approx(0.1 - 0.6 * 0.839 * 0.7 * 0.0952).epsilon(1e-12));
        CHECK(s6.nonrestrict == 0.6);
    }
}

TEST_CASE("BO step") {
    SUBCASE("T_BO = 0 never defers") {
        const auto h = history_of({0.3}, {1.0}, {0.2}, {0.1});
        const auto s = traffic::step_bo(h, 2, 0.1, 0.8, 0);
        CHECK(s.nonrestrict == 1.0);
    }
    SUBCASE("nobody fails, nobody backs off") {
        const auto h = history_of({0.3}, {1.0}, {1.0}, {0.1});
        const auto s = traffic::step_bo(h, 2, 0.1, 1.0, 2);
        CHECK(s.nonrestrict == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("window covers min(t-1, T_BO) slots") {
        const auto h = history_of({0.05, 0.06, 0.08}, {1.0, 0.9, 0.85}, {0.9, 0.9, 0.9},
                                  {0.0, 0.02, 0.03});
        const double g = 0.8;
        const auto s = traffic::step_bo(h, 4, 0.1, g, 2);
        // deferred mass from slots 3 and 2 only (not slot 1)
        const double deferred = (1.0 - g * 0.9) * 0.08 * 0.85 + (1.0 - g * 0.9) * 0.06 * 0.9;
        CHECK(!s.r_clamped);
        CHECK(s.nonrestrict == doctest::Approx(1.0 - deferred / s.nonempty).epsilon(1e-12));
        // a longer window at the same t reaches slot 1 as well
        const auto s3 = traffic::step_bo(h, 4, 0.1, g, 5);
        CHECK(s3.nonrestrict < s.nonrestrict);
    }
    SUBCASE("excursions clamp with a diagnostic") {
        // huge deferred mass against a tiny current A
        const auto h = history_of({0.9}, {1.0}, {0.0}, {0.0});
        const auto s = traffic::step_bo(h, 2, 1e-6, 1.0, 3);
        CHECK(s.r_clamped);
        CHECK(s.nonrestrict == 0.0);
    }
}

TEST_CASE("ACB&BO step") {
    SUBCASE("Q = 1 reproduces BO") {
        const auto h = history_of({0.2, 0.3}, {1.0, 0.8}, {0.5, 0.4}, {0.0, 0.1});
        const auto a = traffic::step_acbbo(h, 3, 0.1, 0.7, 1.0, 2);
        const auto b = traffic::step_bo(h, 3, 0.1, 0.7, 2);
        CHECK(a.mu_cum == b.mu_cum);
        CHECK(a.nonrestrict == b.nonrestrict);
    }
    SUBCASE("T_BO = 0 reduces to the ACB departure with R folded in") {
        const auto h = history_of({0.3}, {1.0}, {0.6}, {0.2});
        const auto a = traffic::step_acbbo(h, 2, 0.1, 0.8, 0.6, 0);
        const auto acb = traffic::step_acb(h, 2, 0.1, 0.8, 0.6);
        CHECK(a.mu_cum == doctest::Approx(acb.mu_cum).epsilon(1e-14));
        CHECK(a.nonrestrict == 1.0);  // the gate lives in the departure factor here
    }
    SUBCASE("Q = 0 stops departures") {
        const auto h = history_of({0.3}, {1.0}, {0.6}, {0.2});
        const auto a = traffic::step_acbbo(h, 2, 0.1, 0.8, 0.0, 2);
        CHECK(a.mu_cum == doctest::Approx(0.1 + 0.2).epsilon(1e-14));
    }
}

TEST_CASE("multislot trace") {
    const NetworkConfig cfg = midrange_config();
    const CeGroupLayout layout = make_layout(cfg, CoverageCase::Case2);
    const AnalyticParams params;
    TrafficConfig tc;
    tc.horizon = 6;

    SUBCASE("ranges and bookkeeping") {
        for (Scheme s : {Scheme::Baseline, Scheme::Acb, Scheme::Bo, Scheme::AcbBo}) {
            TrafficConfig t2 = tc;
            t2.scheme = s;
            const auto trace = traffic::run_multislot(cfg, layout, t2, params);
            REQUIRE(trace.groups == 3);
            for (int g = 0; g < 3; ++g) {
                for (int t = 0; t < tc.horizon; ++t) {
                    const auto& h = trace.per_group[g];
                    CHECK(h.nonempty[t] >= 0.0);
                    CHECK(h.nonempty[t] <= 1.0);
                    CHECK(h.nonrestrict[t] >= 0.0);
                    CHECK(h.nonrestrict[t] <= 1.0);
                    CHECK(h.success[t] >= 0.0);
                    CHECK(h.success[t] <= 1.0);
                    CHECK(h.mu_cum[t] >= 0.0);
                }
            }
        }
    }
    SUBCASE("slot 1 reproduces the single-slot theorem") {
        TrafficConfig t1 = tc;
        t1.horizon = 1;
        const auto trace = traffic::run_multislot(cfg, layout, t1, params);
        for (int g = 0; g < 3; ++g) {
            analytic::GroupSlotInput in;
            in.group = g;
            in.nonempty = traffic::nonempty_initial(t1.mu_new);
            in.nonrestrict = 1.0;
            in.lambda_a = layout.g[g] * cfg.lambda_d / layout.s[g];
            in.repetitions = layout.k[g];
            const auto direct = analytic::rach_success_single_slot(in, cfg, layout, params);
            CHECK(trace.per_group[g].success[0] == doctest::Approx(direct.value).epsilon(1e-12));
        }
    }
    SUBCASE("first-slot gate per scheme") {
        for (Scheme s : {Scheme::Baseline, Scheme::Bo, Scheme::AcbBo}) {
            TrafficConfig t2 = tc;
            t2.scheme = s;
            const auto trace = traffic::run_multislot(cfg, layout, t2, params);
            CHECK(trace.per_group[0].nonrestrict[0] == 1.0);
        }
        TrafficConfig t2 = tc;
        t2.scheme = Scheme::Acb;
        const auto trace = traffic::run_multislot(cfg, layout, t2, params);
        CHECK(trace.per_group[0].nonrestrict[0] == t2.q_acb);
    }
    SUBCASE("scheme equivalences to 1e-12") {
        auto run = [&](Scheme s, double q, int t_bo) {
            TrafficConfig t2 = tc;
            t2.scheme = s;
            t2.q_acb = q;
            t2.t_bo = t_bo;
            return traffic::run_multislot(cfg, layout, t2, params);
        };
        const auto baseline = run(Scheme::Baseline, 0.6, 2);
        const auto acb1 = run(Scheme::Acb, 1.0, 2);
        const auto bo0 = run(Scheme::Bo, 0.6, 0);
        const auto bo = run(Scheme::Bo, 0.6, 2);
        const auto acbbo1 = run(Scheme::AcbBo, 1.0, 2);
        for (int g = 0; g < 3; ++g) {
            for (int t = 0; t < tc.horizon; ++t) {
                CHECK(acb1.per_group[g].success[t] ==
                      doctest::Approx(baseline.per_group[g].success[t]).epsilon(1e-12));
                CHECK(bo0.per_group[g].success[t] ==
                      doctest::Approx(baseline.per_group[g].success[t]).epsilon(1e-12));
                CHECK(acbbo1.per_group[g].success[t] ==
                      doctest::Approx(bo.per_group[g].success[t]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("baseline success decays as queues build up") {
        TrafficConfig t2 = tc;
        t2.mu_new = 0.3;  // enough load that contention grows visibly
        const auto trace = traffic::run_multislot(cfg, layout, t2, params);
        for (int g = 0; g < 3; ++g) {
            const auto& p = trace.per_group[g].success;
            for (int t = 1; t < t2.horizon; ++t) CHECK(p[t] <= p[t - 1] + 1e-9);
        }
    }
}
