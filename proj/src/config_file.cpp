#include "nbrach/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nbrach/units.hpp"

namespace nbrach {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& tok, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': '" + tok + "' is not a number");
    }
    if (used != tok.size())
        throw std::invalid_argument("config key '" + key + "': '" + tok + "' is not a number");
    return v;
}

// value = "number [unit]"; converts via the per-key unit table.
double parse_with_unit(const std::string& key, const std::string& value,
                       const std::map<std::string, std::function<double(double)>>& units) {
    std::istringstream is(value);
    std::string num, unit;
    is >> num >> unit;
    if (num.empty()) throw std::invalid_argument("config key '" + key + "': missing value");
    const double v = parse_number(num, key);
    const auto it = units.find(lower(unit));
    if (it == units.end()) {
        std::string allowed;
        for (const auto& [u, fn] : units) {
            if (!allowed.empty()) allowed += ", ";
            allowed += u.empty() ? "<none>" : u;
        }
        throw std::invalid_argument("config key '" + key + "': unit '" + unit +
                                    "' not recognized (allowed: " + allowed + ")");
    }
    return it->second(v);
}

using units::db_to_linear;
using units::dbm_to_watts;

const std::map<std::string, std::function<double(double)>> kPowerUnits = {
    {"dbm", dbm_to_watts}, {"w", [](double v) { return v; }}};
const std::map<std::string, std::function<double(double)>> kRatioUnits = {
    {"db", db_to_linear}, {"linear", [](double v) { return v; }}};
const std::map<std::string, std::function<double(double)>> kDensityUnits = {
    {"per_km2", units::per_km2_to_per_m2}, {"per_m2", [](double v) { return v; }}};
const std::map<std::string, std::function<double(double)>> kLengthUnits = {
    {"m", [](double v) { return v; }}, {"km", units::km_to_m}};
const std::map<std::string, std::function<double(double)>> kBare = {
    {"", [](double v) { return v; }}};

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = lower(trim(value));
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + value +
                                "'");
}

std::vector<double> parse_grid(const std::string& key, std::string value) {
    std::replace(value.begin(), value.end(), ',', ' ');
    std::istringstream is(value);
    std::vector<double> grid;
    std::string tok;
    while (is >> tok) grid.push_back(parse_number(tok, key));
    return grid;
}

}  // namespace

FullConfig parse_config_text(const std::string& text) {
    FullConfig fc;
    // arrival intensity may come as (t_r + t_g) * epsilon_new instead of mu_new
    double t_r = -1.0, t_g = -1.0, eps_new = -1.0;
    bool mu_new_set = false;

    std::istringstream lines(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(lines, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "lambda_b") {
            fc.net.lambda_b = parse_with_unit(key, value, kDensityUnits);
        } else if (key == "lambda_d") {
            fc.net.lambda_d = parse_with_unit(key, value, kDensityUnits);
        } else if (key == "area_radius") {
            fc.net.area_radius = parse_with_unit(key, value, kLengthUnits);
        } else if (key == "alpha") {
            fc.net.alpha = parse_with_unit(key, value, kBare);
        } else if (key == "p_dl") {
            fc.net.p_dl = parse_with_unit(key, value, kPowerUnits);
        } else if (key == "omega") {
            fc.net.omega = parse_with_unit(key, value, kPowerUnits);
        } else if (key == "delta1") {
            fc.net.delta1 = parse_with_unit(key, value, kRatioUnits);
        } else if (key == "delta2") {
            fc.net.delta2 = parse_with_unit(key, value, kRatioUnits);
        } else if (key == "rho") {
            fc.net.rho = parse_with_unit(key, value, kPowerUnits);
        } else if (key == "p_ul") {
            fc.net.p_ul = parse_with_unit(key, value, kPowerUnits);
        } else if (key == "sigma2") {
            fc.net.sigma2 = parse_with_unit(key, value, kPowerUnits);
        } else if (key == "gamma_th") {
            fc.net.gamma_th = parse_with_unit(key, value, kRatioUnits);
        } else if (key == "s0" || key == "s1" || key == "s2") {
            fc.s[key[1] - '0'] = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "k0" || key == "k1" || key == "k2") {
            fc.k[key[1] - '0'] = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "case") {
            const std::string v = lower(value);
            if (v == "case1" || v == "1")
                fc.cov_case = CoverageCase::Case1;
            else if (v == "case2" || v == "2")
                fc.cov_case = CoverageCase::Case2;
            else
                throw std::invalid_argument("config key 'case': expected case1 or case2");
        } else if (key == "single_group") {
            fc.single_group = parse_bool(key, value);
        } else if (key == "single_group_power") {
            const std::string v = lower(value);
            if (v == "control")
                fc.single_power = SingleGroupPower::Control;
            else if (v == "fixed")
                fc.single_power = SingleGroupPower::Fixed;
            else
                throw std::invalid_argument(
                    "config key 'single_group_power': expected control or fixed");
        } else if (key == "single_group_k") {
            fc.single_k = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "mu_new") {
            fc.traffic.mu_new = parse_with_unit(key, value, kBare);
            mu_new_set = true;
        } else if (key == "t_r") {
            t_r = parse_with_unit(key, value, kBare);
        } else if (key == "t_g") {
            t_g = parse_with_unit(key, value, kBare);
        } else if (key == "epsilon_new") {
            eps_new = parse_with_unit(key, value, kBare);
        } else if (key == "scheme") {
            const std::string v = lower(value);
            if (v == "baseline")
                fc.traffic.scheme = Scheme::Baseline;
            else if (v == "acb")
                fc.traffic.scheme = Scheme::Acb;
            else if (v == "bo")
                fc.traffic.scheme = Scheme::Bo;
            else if (v == "acb_bo" || v == "acbbo" || v == "acb&bo")
                fc.traffic.scheme = Scheme::AcbBo;
            else
                throw std::invalid_argument(
                    "config key 'scheme': expected baseline, acb, bo or acb_bo");
        } else if (key == "q_acb") {
            fc.traffic.q_acb = parse_with_unit(key, value, kBare);
        } else if (key == "t_bo") {
            fc.traffic.t_bo = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "horizon") {
            fc.traffic.horizon = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "quad_rel_tol") {
            fc.params.quad_rel_tol = parse_with_unit(key, value, kBare);
        } else if (key == "series_tail_tol") {
            fc.params.series_tail_tol = parse_with_unit(key, value, kBare);
        } else if (key == "n_max_cap") {
            fc.params.n_max_cap = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "voronoi_c") {
            fc.params.c = parse_with_unit(key, value, kBare);
        } else if (key == "guard_fraction") {
            fc.sim_opts.guard_fraction = parse_with_unit(key, value, kBare);
        } else if (key == "interference") {
            fc.sim_opts.interference = parse_bool(key, value);
        } else if (key == "deployment_retries") {
            fc.sim_opts.deployment_retries = static_cast<int>(parse_with_unit(key, value, kBare));
        } else if (key == "sweep_var") {
            fc.sweep_var = lower(value);
        } else if (key == "sweep_grid") {
            fc.sweep_grid = parse_grid(key, value);
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }

    if (!mu_new_set && (t_r >= 0.0 || t_g >= 0.0 || eps_new >= 0.0)) {
        if (t_r < 0.0 || t_g < 0.0 || eps_new < 0.0)
            throw std::invalid_argument(
                "config: t_r, t_g and epsilon_new must all be given to derive mu_new");
        fc.traffic.mu_new = (t_r + t_g) * eps_new;
    }

    fc.net.validate();
    fc.traffic.validate();
    fc.params.validate();
    if (fc.sim_opts.guard_fraction <= 0.0 || fc.sim_opts.guard_fraction > 1.0)
        throw std::invalid_argument("config key 'guard_fraction': must be in (0,1]");
    build_layout(fc);  // surfaces layout invariant violations (Case1 radii etc.)
    return fc;
}

FullConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

CeGroupLayout build_layout(const FullConfig& fc) {
    if (fc.single_group)
        return make_single_group_layout(fc.net, fc.single_power, fc.single_k);
    return make_layout(fc.net, fc.cov_case, fc.s, fc.k);
}

std::string config_key_reference() {
    return
        "network           units                default\n"
        "  lambda_b        per_km2|per_m2       0.1 per_km2\n"
        "  lambda_d        per_km2|per_m2       10 per_km2\n"
        "  area_radius     m|km                 25231.33 m (~2000 km^2)\n"
        "  alpha           -                    4\n"
        "  p_dl            dbm|w                35 dbm\n"
        "  omega           dbm|w                -135.3 dbm\n"
        "  delta1          db|linear            35 db\n"
        "  delta2          db|linear            30 db\n"
        "  rho             dbm|w                -120 dbm\n"
        "  p_ul            dbm|w                22 dbm\n"
        "  sigma2          dbm|w                -116.4 dbm\n"
        "  gamma_th        db|linear            10 db\n"
        "layout\n"
        "  s0,s1,s2        -                    12,12,24\n"
        "  k0,k1,k2        -                    2,4,16\n"
        "  case            case1|case2          case2\n"
        "  single_group    bool                 false\n"
        "  single_group_power control|fixed     fixed\n"
        "  single_group_k  -                    4\n"
        "traffic\n"
        "  mu_new          packets/slot         0.1  (or t_r,t_g,epsilon_new)\n"
        "  scheme          baseline|acb|bo|acb_bo  baseline\n"
        "  q_acb           -                    0.6\n"
        "  t_bo            slots                2\n"
        "  horizon         slots                10\n"
        "numerics/simulation\n"
        "  quad_rel_tol, series_tail_tol, n_max_cap, voronoi_c\n"
        "  guard_fraction (0,1], interference on|off, deployment_retries\n"
        "custom sweeps\n"
        "  sweep_var       gamma_th_db|lambda_d_per_km2|slot|q_acb|t_bo\n"
        "  sweep_grid      list of numbers\n";
}

}  // namespace nbrach
