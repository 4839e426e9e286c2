#pragma once

#include <vector>

#include "nbrach/analytic.hpp"
#include "nbrach/config.hpp"

namespace nbrach::traffic {

// Non-empty probability in the first slot: only new arrivals can be queued.
double nonempty_initial(double mu_new);

// One-slot state of the analytic queue recursion.
struct SlotState {
    double nonempty = 0.0;     // A_i^t
    double nonrestrict = 1.0;  // R_i^t
    double mu_cum = 0.0;       // accumulated-packet intensity entering slot t
    bool mu_clamped = false;   // negative mu_cum clipped to 0
    bool r_clamped = false;    // R outside [0,1] clipped
};

// Per-group history up to slot t-1; vectors are 0-based (slot t at index t-1).
struct GroupHistory {
    std::vector<double> nonempty;
    std::vector<double> nonrestrict;
    std::vector<double> success;  // P_i^t
    std::vector<double> mu_cum;
};

// Slot-t (t >= 2) updates. mu_new is the per-slot arrival intensity, g the
// group's thinning probability. The departure term follows the scheme:
//   baseline: g * P * A          acb:    g * Q * P * A
//   bo:       g * P * A * R      acb_bo: g * Q * P * A * R
// and the non-restrict probability is 1, Q, or one minus the deferred
// fraction of non-empty devices (failure mass of the last min(t-1, T_bo)
// slots divided by the current A).
SlotState step_baseline(const GroupHistory& h, int t, double mu_new, double g);
SlotState step_acb(const GroupHistory& h, int t, double mu_new, double g, double q_acb);
SlotState step_bo(const GroupHistory& h, int t, double mu_new, double g, int t_bo);
SlotState step_acbbo(const GroupHistory& h, int t, double mu_new, double g, double q_acb,
                     int t_bo);

// Full analytic trace of (A, R, mu_cum, P) per group per slot.
struct QueueTrace {
    int horizon = 0;
    int groups = 0;
    std::vector<GroupHistory> per_group;      // size groups
    std::vector<int> mu_clamp_count;          // per group
    std::vector<int> r_clamp_count;           // per group
    double max_tail_mass = 0.0;               // worst series truncation residual
    bool series_truncated = false;
    double max_cancellation = 0.0;
};

// Runs the per-slot recursion for every group, calling the single-slot
// success probability with each slot's (A, R). Slot 1 uses the initial
// non-empty probability and the scheme's first-slot gate (Q for ACB, 1
// otherwise; under BO nobody has failed yet).
QueueTrace run_multislot(const NetworkConfig& cfg, const CeGroupLayout& layout,
                         const TrafficConfig& traffic, const AnalyticParams& params);

}  // namespace nbrach::traffic
