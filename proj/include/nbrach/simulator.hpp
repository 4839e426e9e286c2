#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nbrach/config.hpp"
#include "nbrach/geometry.hpp"
#include "nbrach/rng.hpp"

namespace nbrach::sim {

struct SimOptions {
    bool interference = true;    // when false the SINR denominator is noise only (test hook)
    double guard_fraction = 0.5; // tallies restricted to devices whose serving BS
                                 // lies within this fraction of the disc radius
    int threads = 1;
    int deployment_retries = 16;
};

struct GroupTally {
    std::uint64_t attempts = 0;
    std::uint64_t preamble_success = 0;  // received: some repetition clears all 4 symbols
    std::uint64_t collisions = 0;        // received but another same-cell preamble also was
    std::uint64_t rach_success = 0;
};

struct SlotOutcome {
    std::array<GroupTally, 3> group{};
};

// One sampled network with per-device buffers and backoff counters, evolved
// slot by slot. All randomness is keyed on (trial key, slot, device, link),
// so outcomes are independent of evaluation order.
class TrialSim {
  public:
    TrialSim(const NetworkConfig& cfg, const CeGroupLayout& layout, const TrafficConfig& traffic,
             geometry::Deployment deployment, rng::Key trial_key, const SimOptions& opts);

    // Runs slot `slot` (1-based; must be called in order) and returns the
    // guard-zone tallies.
    SlotOutcome run_slot(int slot);

    const geometry::Deployment& deployment() const { return dep_; }
    const std::vector<std::uint32_t>& buffers() const { return buffer_; }
    const std::vector<std::uint16_t>& backoff() const { return bo_remaining_; }

    // Forces next slot's preamble choice for listed devices (collision tests).
    void force_preamble(const std::vector<std::pair<std::int32_t, int>>& choices);

  private:
    const NetworkConfig cfg_;
    const CeGroupLayout layout_;
    const TrafficConfig traffic_;
    const SimOptions opts_;
    geometry::Deployment dep_;
    rng::Key trial_key_;

    std::vector<std::uint32_t> buffer_;
    std::vector<std::uint16_t> bo_remaining_;
    std::vector<double> tx_power_;
    std::vector<std::uint8_t> bs_in_guard_;
    std::array<int, 3> preamble_offset_{};
    std::vector<std::pair<std::int32_t, int>> forced_;
    int next_slot_ = 1;
};

struct McEstimate {
    double mean = 0.0;
    double ci_half = 0.0;  // Wilson 95% half-width
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    int trials = 0;
    bool defined = false;  // false when no attempts were observed
};

struct McResult {
    // Indexed [slot-1][group].
    std::vector<std::array<McEstimate, 3>> rach;
    std::vector<std::array<McEstimate, 3>> preamble;
    std::vector<std::array<GroupTally, 3>> totals;
};

// Runs `trials` independent deployments for `slots` slots each and pools the
// guard-zone tallies. Trial seeds derive from master_seed and the trial
// index; results are identical for any thread count.
McResult estimate_success(const NetworkConfig& cfg, const CeGroupLayout& layout,
                          const TrafficConfig& traffic, int slots, int trials,
                          std::uint64_t master_seed, const SimOptions& opts = {});

// Normalized histograms of same-cell same-preamble contender counts seen by
// tagged active devices, each device independently active with probability
// `activity` (the analytic A*R thinning). `pooled` covers every tagged
// device; the per-group views (empty when a group saw no tagged devices) are
// diagnostics.
struct ContenderHistogram {
    std::vector<double> pooled;
    std::array<std::vector<double>, 3> per_group;
    std::array<std::uint64_t, 3> tagged{};  // tagged devices per group
};

ContenderHistogram empirical_interferer_pmf(const NetworkConfig& cfg,
                                            const CeGroupLayout& layout, double activity,
                                            int trials, std::uint64_t master_seed,
                                            const SimOptions& opts = {});

// Wilson 95% interval half-width for s successes in n trials.
double wilson_half_width(std::uint64_t s, std::uint64_t n);

}  // namespace nbrach::sim
