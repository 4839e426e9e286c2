#include "nbrach/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace nbrach::sim {

namespace {

// Key tags keep the independent random substreams apart.
constexpr std::uint64_t kTagDeploy = 0x6465706cU;   // deployment sampling
constexpr std::uint64_t kTagTrial = 0x7472696cU;    // per-trial stream root
constexpr std::uint64_t kTagArrival = 0x61727276U;
constexpr std::uint64_t kTagAcb = 0x61636221U;
constexpr std::uint64_t kTagPreamble = 0x70726d62U;
constexpr std::uint64_t kTagFade = 0x66616465U;
constexpr std::uint64_t kTagActive = 0x61637476U;

double sq(double x) { return x * x; }

}  // namespace

TrialSim::TrialSim(const NetworkConfig& cfg, const CeGroupLayout& layout,
                   const TrafficConfig& traffic, geometry::Deployment deployment,
                   rng::Key trial_key, const SimOptions& opts)
    : cfg_(cfg), layout_(layout), traffic_(traffic), opts_(opts), dep_(std::move(deployment)),
      trial_key_(trial_key) {
    const std::size_t nd = dep_.devices.size();
    buffer_.assign(nd, 0);
    bo_remaining_.assign(nd, 0);
    tx_power_.resize(nd);
    const bool power_control =
        layout_.single_group ? layout_.single_power == SingleGroupPower::Control : true;
    for (std::size_t j = 0; j < nd; ++j) {
        if (dep_.group[j] < 0) {
            tx_power_[j] = 0.0;
            continue;
        }
        const bool pc = layout_.single_group ? power_control : dep_.group[j] == 0;
        tx_power_[j] = pc ? cfg_.rho * std::pow(dep_.dist[j], cfg_.alpha) : cfg_.p_ul;
    }
    bs_in_guard_.resize(dep_.bs.size());
    const double guard_r2 = sq(opts_.guard_fraction * cfg_.area_radius);
    for (std::size_t b = 0; b < dep_.bs.size(); ++b)
        bs_in_guard_[b] = sq(dep_.bs[b].x) + sq(dep_.bs[b].y) <= guard_r2 ? 1 : 0;
    preamble_offset_ = {0, layout_.s[0], layout_.s[0] + layout_.s[1]};
}

void TrialSim::force_preamble(const std::vector<std::pair<std::int32_t, int>>& choices) {
    forced_ = choices;
}

SlotOutcome TrialSim::run_slot(int slot) {
    if (slot != next_slot_)
        throw std::logic_error("TrialSim::run_slot: slots must be run in order starting at 1");
    ++next_slot_;
    const rng::Key slot_key = trial_key_.with(static_cast<std::uint64_t>(slot));
    const std::size_t nd = dep_.devices.size();
    const bool uses_acb = traffic_.scheme == Scheme::Acb || traffic_.scheme == Scheme::AcbBo;
    const bool uses_bo = traffic_.scheme == Scheme::Bo || traffic_.scheme == Scheme::AcbBo;

    // 1) arrivals, 2) gating, 3) preamble choice
    const int total_preambles = layout_.single_group
                                    ? layout_.s[0]
                                    : layout_.s[0] + layout_.s[1] + layout_.s[2];
    std::vector<std::vector<std::int32_t>> bucket(total_preambles);
    std::vector<std::int32_t> chosen(nd, -1);
    for (std::size_t j = 0; j < nd; ++j) {
        const double arrivals_mean = traffic_.mu_new;
        if (arrivals_mean > 0.0) {
            rng::Stream arr(slot_key.with(kTagArrival, j));
            buffer_[j] += static_cast<std::uint32_t>(arr.poisson(arrivals_mean));
        }
        if (dep_.group[j] < 0) continue;
        if (bo_remaining_[j] > 0) {
            --bo_remaining_[j];
            continue;
        }
        if (buffer_[j] == 0) continue;
        if (uses_acb && rng::u01(slot_key.with(kTagAcb, j), 0) >= traffic_.q_acb) continue;
        const int g = dep_.group[j];
        const int s_g = layout_.s[g];
        int idx = static_cast<int>(rng::u01(slot_key.with(kTagPreamble, j), 0) * s_g);
        if (idx >= s_g) idx = s_g - 1;
        int preamble = preamble_offset_[g] + idx;
        for (const auto& [dev, p] : forced_)
            if (dev == static_cast<std::int32_t>(j)) preamble = p;
        chosen[j] = preamble;
        bucket[preamble].push_back(static_cast<std::int32_t>(j));
    }
    forced_.clear();

    // 4) SINR per repetition and symbol group, 5) collision, 6) bookkeeping
    SlotOutcome out;
    std::vector<std::uint8_t> received(nd, 0);
    std::vector<double> w;            // received powers of bucket members at one BS
    std::vector<double> noise_total;  // interference-plus-signal sums per (rep, symbol)
    for (int p = 0; p < total_preambles; ++p) {
        const auto& members = bucket[p];
        if (members.empty()) continue;
        const int g = dep_.group[members.front()];
        const int reps = layout_.k[g];

        // BSs that serve at least one member; members are index-sorted, so
        // the list (and everything downstream) is deployment-deterministic.
        std::vector<std::int32_t> hosts;
        for (std::int32_t j : members) {
            if (std::find(hosts.begin(), hosts.end(), dep_.assoc[j]) == hosts.end())
                hosts.push_back(dep_.assoc[j]);
        }

        for (std::int32_t b : hosts) {
            w.resize(members.size());
            for (std::size_t m = 0; m < members.size(); ++m) {
                const std::int32_t j = members[m];
                const double d = dep_.assoc[j] == b
                                     ? dep_.dist[j]
                                     : std::sqrt(sq(dep_.devices[j].x - dep_.bs[b].x) +
                                                 sq(dep_.devices[j].y - dep_.bs[b].y));
                w[m] = tx_power_[j] * std::pow(d, -cfg_.alpha);
            }
            if (opts_.interference) {
                noise_total.assign(static_cast<std::size_t>(reps) * 4, 0.0);
                for (std::size_t m = 0; m < members.size(); ++m) {
                    const rng::Key link =
                        slot_key.with(kTagFade, static_cast<std::uint64_t>(b),
                                      static_cast<std::uint64_t>(members[m]));
                    for (int f = 0; f < reps * 4; ++f)
                        noise_total[f] += w[m] * rng::exponential(link, f);
                }
            }
            for (std::size_t m = 0; m < members.size(); ++m) {
                const std::int32_t d = members[m];
                if (dep_.assoc[d] != b) continue;
                const rng::Key link = slot_key.with(kTagFade, static_cast<std::uint64_t>(b),
                                                    static_cast<std::uint64_t>(d));
                bool got = false;
                for (int k = 0; k < reps && !got; ++k) {
                    bool ok = true;
                    for (int beta = 0; beta < 4; ++beta) {
                        const int f = k * 4 + beta;
                        const double sig = w[m] * rng::exponential(link, f);
                        const double interf =
                            opts_.interference ? noise_total[f] - sig : 0.0;
                        if (sig < cfg_.gamma_th * (interf + cfg_.sigma2)) {
                            ok = false;
                            break;
                        }
                    }
                    got = ok;
                }
                received[d] = got ? 1 : 0;
            }
        }

        // collision: per cell, a lone received preamble wins
        for (std::int32_t b : hosts) {
            int n_received = 0;
            for (std::int32_t j : members)
                if (dep_.assoc[j] == b && received[j]) ++n_received;
            for (std::int32_t j : members) {
                if (dep_.assoc[j] != b) continue;
                const bool tally = bs_in_guard_[b] != 0;
                const bool rach_ok = received[j] && n_received == 1;
                if (tally) {
                    auto& t = out.group[g];
                    ++t.attempts;
                    if (received[j]) ++t.preamble_success;
                    if (received[j] && n_received > 1) ++t.collisions;
                    if (rach_ok) ++t.rach_success;
                }
                if (rach_ok) {
                    --buffer_[j];
                } else if (uses_bo) {
                    bo_remaining_[j] = static_cast<std::uint16_t>(traffic_.t_bo);
                }
            }
        }
    }
    return out;
}

double wilson_half_width(std::uint64_t s, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double z = 1.959963984540054;
    const double nd = static_cast<double>(n);
    const double p = static_cast<double>(s) / nd;
    const double z2n = z * z / nd;
    return z * std::sqrt(p * (1.0 - p) / nd + z2n / (4.0 * nd)) / (1.0 + z2n);
}

namespace {

McEstimate make_estimate(std::uint64_t successes, std::uint64_t attempts, int trials) {
    McEstimate e;
    e.attempts = attempts;
    e.successes = successes;
    e.trials = trials;
    if (attempts > 0) {
        e.defined = true;
        const double z = 1.959963984540054;
        const double nd = static_cast<double>(attempts);
        const double p = static_cast<double>(successes) / nd;
        e.mean = (p + z * z / (2.0 * nd)) / (1.0 + z * z / nd);
        e.ci_half = wilson_half_width(successes, attempts);
    }
    return e;
}

}  // namespace

McResult estimate_success(const NetworkConfig& cfg, const CeGroupLayout& layout,
                          const TrafficConfig& traffic, int slots, int trials,
                          std::uint64_t master_seed, const SimOptions& opts) {
    if (trials < 1) throw std::invalid_argument("estimate_success: trials must be >= 1");
    if (slots < 1) throw std::invalid_argument("estimate_success: slots must be >= 1");

    std::vector<std::vector<SlotOutcome>> per_trial(trials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int trial = next.fetch_add(1);
            if (trial >= trials) return;
            const std::uint64_t dep_seed =
                rng::Key(master_seed).with(kTagDeploy, static_cast<std::uint64_t>(trial)).state;
            geometry::Deployment dep =
                geometry::sample_deployment(cfg, layout, dep_seed, opts.deployment_retries);
            TrialSim sim(cfg, layout, traffic, std::move(dep),
                         rng::Key(master_seed).with(kTagTrial, static_cast<std::uint64_t>(trial)),
                         opts);
            auto& slots_out = per_trial[trial];
            slots_out.reserve(slots);
            for (int t = 1; t <= slots; ++t) slots_out.push_back(sim.run_slot(t));
        }
    };
    const int nthreads = std::max(1, opts.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    McResult res;
    res.totals.assign(slots, {});
    for (int trial = 0; trial < trials; ++trial) {
        for (int t = 0; t < slots; ++t) {
            for (int g = 0; g < 3; ++g) {
                auto& acc = res.totals[t][g];
                const auto& one = per_trial[trial][t].group[g];
                acc.attempts += one.attempts;
                acc.preamble_success += one.preamble_success;
                acc.collisions += one.collisions;
                acc.rach_success += one.rach_success;
            }
        }
    }
    res.rach.resize(slots);
    res.preamble.resize(slots);
    for (int t = 0; t < slots; ++t) {
        for (int g = 0; g < 3; ++g) {
            res.rach[t][g] = make_estimate(res.totals[t][g].rach_success,
                                           res.totals[t][g].attempts, trials);
            res.preamble[t][g] = make_estimate(res.totals[t][g].preamble_success,
                                               res.totals[t][g].attempts, trials);
        }
    }
    return res;
}

ContenderHistogram empirical_interferer_pmf(const NetworkConfig& cfg,
                                            const CeGroupLayout& layout, double activity,
                                            int trials, std::uint64_t master_seed,
                                            const SimOptions& opts) {
    if (activity < 0.0 || activity > 1.0)
        throw std::invalid_argument("empirical_interferer_pmf: activity must be in [0,1]");
    std::array<std::vector<std::uint64_t>, 3> hist;
    std::array<std::uint64_t, 3> total{};
    const double guard_r2 = sq(opts.guard_fraction * cfg.area_radius);
    const std::array<int, 3> offset{0, layout.s[0], layout.s[0] + layout.s[1]};
    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t dep_seed =
            rng::Key(master_seed).with(kTagDeploy, static_cast<std::uint64_t>(trial)).state;
        geometry::Deployment dep =
            geometry::sample_deployment(cfg, layout, dep_seed, opts.deployment_retries);
        const rng::Key trial_key =
            rng::Key(master_seed).with(kTagTrial, static_cast<std::uint64_t>(trial));
        const std::size_t nd = dep.devices.size();
        std::vector<std::int32_t> chosen(nd, -1);
        const int total_preambles =
            layout.single_group ? layout.s[0] : layout.s[0] + layout.s[1] + layout.s[2];
        std::vector<std::vector<std::int32_t>> bucket(total_preambles);
        for (std::size_t j = 0; j < nd; ++j) {
            if (dep.group[j] < 0) continue;
            if (rng::u01(trial_key.with(kTagActive, j), 0) >= activity) continue;
            const int g = dep.group[j];
            int idx = static_cast<int>(rng::u01(trial_key.with(kTagPreamble, j), 0) *
                                       layout.s[g]);
            if (idx >= layout.s[g]) idx = layout.s[g] - 1;
            const int p = (layout.single_group ? 0 : offset[g]) + idx;
            chosen[j] = p;
            bucket[p].push_back(static_cast<std::int32_t>(j));
        }
        for (std::size_t j = 0; j < nd; ++j) {
            if (chosen[j] < 0) continue;
            const auto& bs = dep.bs[dep.assoc[j]];
            if (sq(bs.x) + sq(bs.y) > guard_r2) continue;
            std::uint64_t n = 0;
            for (std::int32_t other : bucket[chosen[j]])
                if (other != static_cast<std::int32_t>(j) && dep.assoc[other] == dep.assoc[j])
                    ++n;
            const int g = dep.group[j];
            if (hist[g].size() <= n) hist[g].resize(n + 1, 0);
            ++hist[g][n];
            ++total[g];
        }
    }
    ContenderHistogram out;
    out.tagged = total;
    std::uint64_t grand = 0;
    std::size_t width = 0;
    for (int g = 0; g < 3; ++g) {
        grand += total[g];
        width = std::max(width, hist[g].size());
        out.per_group[g].resize(hist[g].size());
        for (std::size_t i = 0; i < hist[g].size(); ++i)
            out.per_group[g][i] =
                static_cast<double>(hist[g][i]) / static_cast<double>(total[g]);
    }
    out.pooled.assign(width, 0.0);
    if (grand > 0) {
        for (int g = 0; g < 3; ++g)
            for (std::size_t i = 0; i < hist[g].size(); ++i)
                out.pooled[i] += static_cast<double>(hist[g][i]) / static_cast<double>(grand);
    }
    return out;
}

}  // namespace nbrach::sim
