#pragma once

#include <cmath>

// Unit conversions used at the configuration boundary. Everything inside the
// library is strict SI: meters, watts, per-m^2 densities, linear ratios.
namespace nbrach::units {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double per_km2_to_per_m2(double x) { return x * 1e-6; }
inline double km2_to_m2(double x) { return x * 1e6; }
inline double km_to_m(double x) { return x * 1e3; }

}  // namespace nbrach::units
