#include "nbrach/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <stdexcept>

namespace nbrach::numerics {

double lower_incomplete_gamma(double a, double x) {
    if (a <= 0.0) throw std::domain_error("lower_incomplete_gamma: a must be > 0");
    if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    return boost::math::tgamma_lower(a, x);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol) {
    if (!(hi > lo)) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    return gauss_kronrod<double, 15>::integrate(f, lo, hi, 15, rel_tol, &error);
}

}  // namespace nbrach::numerics
