#include "nbrach/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nbrach/simulator.hpp"
#include "nbrach/traffic.hpp"
#include "nbrach/units.hpp"

namespace nbrach::experiment {

namespace {

std::string fmt10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void apply_sweep(FullConfig& fc, const std::string& var, double v) {
    if (var == "gamma_th_db") {
        fc.net.gamma_th = units::db_to_linear(v);
    } else if (var == "lambda_d_per_km2") {
        fc.net.lambda_d = units::per_km2_to_per_m2(v);
    } else if (var == "q_acb") {
        fc.traffic.q_acb = v;
    } else if (var == "t_bo") {
        fc.traffic.t_bo = static_cast<int>(v);
    } else if (var == "slot") {
        // handled by row emission; nothing to set
    } else {
        throw std::invalid_argument("unknown sweep variable '" + var + "'");
    }
}

std::string analytic_diag(const traffic::QueueTrace& trace, int group) {
    std::string d = "tail=" + fmt3(trace.max_tail_mass) +
                    ";cancel=" + fmt3(trace.max_cancellation);
    if (trace.mu_clamp_count[group] > 0)
        d += ";mu_clamps=" + std::to_string(trace.mu_clamp_count[group]);
    if (trace.r_clamp_count[group] > 0)
        d += ";r_clamps=" + std::to_string(trace.r_clamp_count[group]);
    if (trace.series_truncated) d += ";truncated";
    return d;
}

}  // namespace

void ExperimentSpec::validate() const {
    if (!run_analytic && !run_sim)
        throw std::invalid_argument("experiment '" + name + "': empty mode set");
    if (grid.empty()) throw std::invalid_argument("experiment '" + name + "': empty sweep grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("experiment '" + name + "': sweep grid must be sorted");
    if (schemes.empty()) throw std::invalid_argument("experiment '" + name + "': no schemes");
    if (slots < 1) throw std::invalid_argument("experiment '" + name + "': slots must be >= 1");
    if (trials < 1) throw std::invalid_argument("experiment '" + name + "': trials must be >= 1");
}

std::vector<std::string> experiment_names() {
    return {"fig3_sinr_sweep", "fig4_single_vs_three", "fig5_density_sweep",
            "fig6_timeseries",  "fig7_acb_sweep",       "fig8_bo_sweep",
            "custom"};
}

ExperimentSpec make_experiment(const std::string& name, FullConfig base) {
    ExperimentSpec spec;
    spec.name = name;
    spec.base = std::move(base);
    spec.schemes = {spec.base.traffic.scheme};
    if (name == "fig3_sinr_sweep") {
        spec.sweep_var = "gamma_th_db";
        spec.grid = {0, 5, 10, 15, 20};
        spec.slots = 1;
    } else if (name == "fig4_single_vs_three") {
        spec.sweep_var = "gamma_th_db";
        spec.grid = {0, 5, 10, 15, 20};
        spec.slots = 1;
        spec.single_group_variants = true;
    } else if (name == "fig5_density_sweep") {
        spec.sweep_var = "lambda_d_per_km2";
        spec.grid = {1, 5, 10, 50};
        spec.slots = 1;
    } else if (name == "fig6_timeseries") {
        spec.sweep_var = "slot";
        spec.grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        spec.slots = 10;
        spec.schemes = {Scheme::Baseline, Scheme::Acb, Scheme::Bo, Scheme::AcbBo};
    } else if (name == "fig7_acb_sweep") {
        spec.sweep_var = "q_acb";
        spec.grid = {0.2, 0.4, 0.6, 0.8, 1.0};
        spec.slots = 5;
        spec.emit_last_slot_only = true;
        spec.schemes = {Scheme::Acb};
    } else if (name == "fig8_bo_sweep") {
        spec.sweep_var = "t_bo";
        spec.grid = {0, 1, 2, 3, 4, 5};
        spec.slots = 5;
        spec.emit_last_slot_only = true;
        spec.schemes = {Scheme::Bo};
    } else if (name == "custom") {
        spec.sweep_var = spec.base.sweep_var;
        spec.grid = spec.base.sweep_grid;
        spec.slots = spec.base.traffic.horizon;
        if (spec.sweep_var.empty())
            throw std::invalid_argument("custom experiment: config must set sweep_var");
        if (spec.sweep_var == "slot") {
            spec.grid.clear();
            for (int t = 1; t <= spec.slots; ++t) spec.grid.push_back(t);
        }
    } else {
        throw std::invalid_argument("unknown experiment '" + name + "'");
    }
    return spec;
}

namespace {

struct PointContext {
    const ExperimentSpec& spec;
    double sweep_value;
    int point_index;
    ExperimentResult& out;
};

// Rows for one (config, layout, scheme, case-label) combination.
void emit_combo(PointContext& ctx, const FullConfig& fc, const CeGroupLayout& layout,
                Scheme scheme, const std::string& case_label, std::uint64_t combo_seed) {
    const ExperimentSpec& spec = ctx.spec;
    const bool slot_sweep = spec.sweep_var == "slot";
    std::vector<int> emit_slots;
    if (slot_sweep) {
        emit_slots.push_back(static_cast<int>(ctx.sweep_value));
    } else if (spec.emit_last_slot_only) {
        emit_slots.push_back(spec.slots);
    } else {
        for (int t = 1; t <= spec.slots; ++t) emit_slots.push_back(t);
    }

    TrafficConfig traffic = fc.traffic;
    traffic.scheme = scheme;
    traffic.horizon = spec.slots;

    const int groups = layout.num_groups();

    traffic::QueueTrace trace;
    bool analytic_ok = false;
    std::string analytic_err;
    if (spec.run_analytic) {
        try {
            trace = traffic::run_multislot(fc.net, layout, traffic, fc.params);
            analytic_ok = true;
        } catch (const std::exception& e) {
            analytic_err = e.what();
        }
    }

    sim::McResult mc;
    bool mc_ok = false;
    std::string mc_err;
    if (spec.run_sim) {
        try {
            sim::SimOptions opts = fc.sim_opts;
            opts.threads = spec.threads;
            mc = sim::estimate_success(fc.net, layout, traffic, spec.slots, spec.trials,
                                       combo_seed, opts);
            mc_ok = true;
        } catch (const std::exception& e) {
            mc_err = e.what();
        }
    }

    for (int slot : emit_slots) {
        for (int g = 0; g < groups; ++g) {
            if (spec.run_analytic) {
                ResultRow row;
                row.sweep_var = spec.sweep_var;
                row.sweep_value = ctx.sweep_value;
                row.slot = slot;
                row.group = g;
                row.case_label = case_label;
                row.scheme = to_string(scheme);
                row.mode = "analytic";
                if (analytic_ok) {
                    row.has_analytic = true;
                    row.p_analytic = trace.per_group[g].success[slot - 1];
                    row.diag = analytic_diag(trace, g);
                } else {
                    row.failed = true;
                    row.diag = "error:" + analytic_err;
                }
                ctx.out.rows.push_back(std::move(row));
            }
            if (spec.run_sim) {
                ResultRow row;
                row.sweep_var = spec.sweep_var;
                row.sweep_value = ctx.sweep_value;
                row.slot = slot;
                row.group = g;
                row.case_label = case_label;
                row.scheme = to_string(scheme);
                row.mode = "sim";
                if (mc_ok) {
                    const sim::McEstimate& e = mc.rach[slot - 1][g];
                    if (e.defined) {
                        row.has_mc = true;
                        row.p_mc = e.mean;
                        row.ci_half = e.ci_half;
                        row.diag = "attempts=" + std::to_string(e.attempts);
                    } else {
                        row.diag = "undefined:no_attempts";
                    }
                } else {
                    row.failed = true;
                    row.diag = "error:" + mc_err;
                }
                ctx.out.rows.push_back(std::move(row));
            }
        }
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream* progress) {
    spec.validate();
    ExperimentResult out;
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const double v = spec.grid[i];
        if (progress) {
            *progress << "[" << spec.name << "] point " << (i + 1) << "/" << spec.grid.size()
                      << " " << spec.sweep_var << "=" << v << "\n";
            progress->flush();
        }
        PointContext ctx{spec, v, static_cast<int>(i), out};
        FullConfig fc = spec.base;
        try {
            apply_sweep(fc, spec.sweep_var, v);
        } catch (const std::exception& e) {
            ResultRow row;
            row.sweep_var = spec.sweep_var;
            row.sweep_value = v;
            row.failed = true;
            row.diag = std::string("error:") + e.what();
            out.rows.push_back(std::move(row));
            continue;
        }
        // Sweep-point seeds derive from the master seed and the grid index
        // only, so a rerun of the same spec is reproducible.
        const std::uint64_t point_seed = rng::Key(spec.master_seed).with(0x73776565ULL, i).state;

        for (std::size_t sch = 0; sch < spec.schemes.size(); ++sch) {
            const Scheme scheme = spec.schemes[sch];
            const std::uint64_t combo_seed = rng::Key(point_seed).with(sch).state;
            try {
                const CeGroupLayout layout = build_layout(fc);
                emit_combo(ctx, fc, layout, scheme,
                           fc.single_group ? (fc.single_power == SingleGroupPower::Control
                                                  ? "single_pc"
                                                  : "single_fp")
                                           : to_string(fc.cov_case),
                           combo_seed);
            } catch (const std::exception& e) {
                ResultRow row;
                row.sweep_var = spec.sweep_var;
                row.sweep_value = v;
                row.scheme = to_string(scheme);
                row.failed = true;
                row.diag = std::string("error:") + e.what();
                out.rows.push_back(std::move(row));
            }
            if (spec.single_group_variants && !fc.single_group) {
                // one-group comparison networks: same repetition values as the
                // compared groups, power control vs fixed power
                const struct {
                    SingleGroupPower power;
                    int k;
                    const char* label;
                } variants[] = {{SingleGroupPower::Control, fc.k[0], "single_pc"},
                                {SingleGroupPower::Fixed, fc.k[1], "single_fp"}};
                for (int vi = 0; vi < 2; ++vi) {
                    FullConfig sg = fc;
                    sg.single_group = true;
                    sg.single_power = variants[vi].power;
                    sg.single_k = variants[vi].k;
                    const std::uint64_t seed2 = rng::Key(combo_seed).with(100 + vi).state;
                    try {
                        const CeGroupLayout layout = build_layout(sg);
                        emit_combo(ctx, sg, layout, scheme, variants[vi].label, seed2);
                    } catch (const std::exception& e) {
                        ResultRow row;
                        row.sweep_var = spec.sweep_var;
                        row.sweep_value = v;
                        row.scheme = to_string(scheme);
                        row.case_label = variants[vi].label;
                        row.failed = true;
                        row.diag = std::string("error:") + e.what();
                        out.rows.push_back(std::move(row));
                    }
                }
            }
        }
    }
    return out;
}

void write_csv(const ExperimentResult& result, std::ostream& os) {
    os << "sweep_var,sweep_value,slot,group,case,scheme,mode,p_analytic,p_mc,ci_half,diag\n";
    for (const ResultRow& r : result.rows) {
        os << r.sweep_var << ',' << fmt10(r.sweep_value) << ',' << r.slot << ',' << r.group
           << ',' << r.case_label << ',' << r.scheme << ',' << r.mode << ','
           << (r.has_analytic ? fmt10(r.p_analytic) : "") << ','
           << (r.has_mc ? fmt10(r.p_mc) : "") << ',' << (r.has_mc ? fmt10(r.ci_half) : "")
           << ',' << r.diag << '\n';
    }
}

void write_json(const ExperimentResult& result, std::ostream& os) {
    os << "[\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const ResultRow& r = result.rows[i];
        os << "  {\"sweep_var\":" << nlohmann::json(r.sweep_var) << ",\"sweep_value\":"
           << fmt10(r.sweep_value) << ",\"slot\":" << r.slot << ",\"group\":" << r.group
           << ",\"case\":" << nlohmann::json(r.case_label)
           << ",\"scheme\":" << nlohmann::json(r.scheme)
           << ",\"mode\":" << nlohmann::json(r.mode) << ",\"p_analytic\":"
           << (r.has_analytic ? fmt10(r.p_analytic) : "null") << ",\"p_mc\":"
           << (r.has_mc ? fmt10(r.p_mc) : "null") << ",\"ci_half\":"
           << (r.has_mc ? fmt10(r.ci_half) : "null")
           << ",\"diag\":" << nlohmann::json(r.diag) << ",\"failed\":"
           << (r.failed ? "true" : "false") << "}" << (i + 1 < result.rows.size() ? "," : "")
           << "\n";
    }
    os << "]\n";
}

ExperimentResult read_json(std::istream& is) {
    nlohmann::json j;
    is >> j;
    ExperimentResult out;
    for (const auto& o : j) {
        ResultRow r;
        r.sweep_var = o.at("sweep_var").get<std::string>();
        r.sweep_value = o.at("sweep_value").get<double>();
        r.slot = o.at("slot").get<int>();
        r.group = o.at("group").get<int>();
        r.case_label = o.at("case").get<std::string>();
        r.scheme = o.at("scheme").get<std::string>();
        r.mode = o.at("mode").get<std::string>();
        if (!o.at("p_analytic").is_null()) {
            r.has_analytic = true;
            r.p_analytic = o.at("p_analytic").get<double>();
        }
        if (!o.at("p_mc").is_null()) {
            r.has_mc = true;
            r.p_mc = o.at("p_mc").get<double>();
            r.ci_half = o.at("ci_half").get<double>();
        }
        r.diag = o.at("diag").get<std::string>();
        r.failed = o.at("failed").get<bool>();
        out.rows.push_back(std::move(r));
    }
    return out;
}

void write_results(const ExperimentResult& result, const std::string& format,
                   const std::string& path) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (path != "-") {
        file.open(path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        os = &file;
    }
    if (format == "csv") {
        write_csv(result, *os);
    } else if (format == "json") {
        write_json(result, *os);
    } else {
        throw std::invalid_argument("unknown output format '" + format + "' (csv|json)");
    }
    os->flush();
    if (path != "-" && !*os) throw std::runtime_error("write failed: " + path);
}

}  // namespace nbrach::experiment
