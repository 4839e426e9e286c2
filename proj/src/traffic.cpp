#include "nbrach/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nbrach::traffic {

double nonempty_initial(double mu_new) {
    if (mu_new < 0.0) throw std::domain_error("nonempty_initial: mu_new must be >= 0");
    return -std::expm1(-mu_new);
}

namespace {

// Shared tail of every step: clamp mu_cum, then A = 1 - e^{-mu_new - mu_cum}.
SlotState finish(double mu_cum, double mu_new) {
    SlotState s;
    s.mu_clamped = mu_cum < 0.0;
    s.mu_cum = std::max(0.0, mu_cum);
    s.nonempty = -std::expm1(-mu_new - s.mu_cum);
    return s;
}

void check_step(const GroupHistory& h, int t) {
    if (t < 2) throw std::invalid_argument("scheme step: t must be >= 2");
    if (static_cast<int>(h.nonempty.size()) < t - 1 ||
        static_cast<int>(h.success.size()) < t - 1)
        throw std::invalid_argument("scheme step: history shorter than t-1 slots");
}

// Deferred-mass ratio of the BO family: sum over the last window slots of
// (1 - fail_weight * P) * A * R, divided by the current non-empty mass.
double backoff_nonrestrict(const GroupHistory& h, int t, double g_weight, int t_bo,
                           double nonempty_now, bool* clamped) {
    *clamped = false;
    if (t_bo <= 0) return 1.0;
    const int window = std::min(t - 1, t_bo);
    double deferred = 0.0;
    for (int s = 1; s <= window; ++s) {
        const int idx = t - s - 1;  // slot t-s, 0-based
        deferred += (1.0 - g_weight * h.success[idx]) * h.nonempty[idx] * h.nonrestrict[idx];
    }
    if (nonempty_now <= 0.0) return 1.0;  // nobody non-empty, nobody to restrict
    double r = 1.0 - deferred / nonempty_now;
    if (r < 0.0 || r > 1.0) {
        *clamped = true;
        r = std::clamp(r, 0.0, 1.0);
    }
    return r;
}

}  // namespace

SlotState step_baseline(const GroupHistory& h, int t, double mu_new, double g) {
    check_step(h, t);
    const int p = t - 2;  // slot t-1, 0-based
    SlotState s = finish(mu_new + h.mu_cum[p] - g * h.success[p] * h.nonempty[p], mu_new);
    s.nonrestrict = 1.0;
    return s;
}

SlotState step_acb(const GroupHistory& h, int t, double mu_new, double g, double q_acb) {
    check_step(h, t);
    const int p = t - 2;
    SlotState s =
        finish(mu_new + h.mu_cum[p] - g * q_acb * h.success[p] * h.nonempty[p], mu_new);
    s.nonrestrict = q_acb;
    return s;
}

SlotState step_bo(const GroupHistory& h, int t, double mu_new, double g, int t_bo) {
    check_step(h, t);
    const int p = t - 2;
    // factor order matches step_acbbo so the Q=1 equivalence is bit-exact
    SlotState s = finish(
        mu_new + h.mu_cum[p] - g * h.success[p] * h.nonempty[p] * h.nonrestrict[p], mu_new);
    s.nonrestrict = backoff_nonrestrict(h, t, g, t_bo, s.nonempty, &s.r_clamped);
    return s;
}

SlotState step_acbbo(const GroupHistory& h, int t, double mu_new, double g, double q_acb,
                     int t_bo) {
    check_step(h, t);
    const int p = t - 2;
    SlotState s = finish(
        mu_new + h.mu_cum[p] - g * q_acb * h.success[p] * h.nonempty[p] * h.nonrestrict[p],
        mu_new);
    s.nonrestrict = backoff_nonrestrict(h, t, g * q_acb, t_bo, s.nonempty, &s.r_clamped);
    return s;
}

QueueTrace run_multislot(const NetworkConfig& cfg, const CeGroupLayout& layout,
                         const TrafficConfig& traffic, const AnalyticParams& params) {
    traffic.validate();

    QueueTrace trace;
    trace.horizon = traffic.horizon;
    trace.groups = layout.num_groups();
    trace.per_group.resize(trace.groups);
    trace.mu_clamp_count.assign(trace.groups, 0);
    trace.r_clamp_count.assign(trace.groups, 0);

    for (int gi = 0; gi < trace.groups; ++gi) {
        GroupHistory& h = trace.per_group[gi];
        const double g = layout.g[gi];
        const double lambda_a = g * cfg.lambda_d / static_cast<double>(layout.s[gi]);

        for (int t = 1; t <= traffic.horizon; ++t) {
            SlotState s;
            if (t == 1) {
                s.nonempty = nonempty_initial(traffic.mu_new);
                s.nonrestrict = traffic.scheme == Scheme::Acb ? traffic.q_acb : 1.0;
                s.mu_cum = 0.0;
            } else {
                switch (traffic.scheme) {
                    case Scheme::Baseline:
                        s = step_baseline(h, t, traffic.mu_new, g);
                        break;
                    case Scheme::Acb:
                        s = step_acb(h, t, traffic.mu_new, g, traffic.q_acb);
                        break;
                    case Scheme::Bo:
                        s = step_bo(h, t, traffic.mu_new, g, traffic.t_bo);
                        break;
                    case Scheme::AcbBo:
                        s = step_acbbo(h, t, traffic.mu_new, g, traffic.q_acb, traffic.t_bo);
                        break;
                }
            }
            analytic::GroupSlotInput in;
            in.group = gi;
            in.nonempty = s.nonempty;
            in.nonrestrict = s.nonrestrict;
            in.lambda_a = lambda_a;
            in.repetitions = layout.k[gi];
            const analytic::RachResult r =
                analytic::rach_success_single_slot(in, cfg, layout, params);

            h.nonempty.push_back(s.nonempty);
            h.nonrestrict.push_back(s.nonrestrict);
            h.mu_cum.push_back(s.mu_cum);
            h.success.push_back(r.value);
            trace.mu_clamp_count[gi] += s.mu_clamped ? 1 : 0;
            trace.r_clamp_count[gi] += s.r_clamped ? 1 : 0;
            trace.max_tail_mass = std::max(trace.max_tail_mass, r.tail_mass);
            trace.series_truncated = trace.series_truncated || r.truncated;
            trace.max_cancellation = std::max(trace.max_cancellation, r.cancellation);
        }
    }
    return trace;
}

}  // namespace nbrach::traffic
