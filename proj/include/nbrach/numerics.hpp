#pragma once

#include <cmath>
#include <functional>

namespace nbrach::numerics {

// Lower incomplete gamma gamma(a, x) = int_0^x t^{a-1} e^{-t} dt, a > 0.
// Relative accuracy better than 1e-12. Throws std::domain_error for a <= 0
// or x < 0.
double lower_incomplete_gamma(double a, double x);

// Adaptive Gauss-Kronrod on a finite interval, relative tolerance rel_tol.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol);

// Compensated (Neumaier) accumulator for alternating or ill-conditioned sums.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        if (std::abs(x) > max_abs_term_) max_abs_term_ = std::abs(x);
    }
    double value() const { return sum_ + comp_; }
    double max_abs_term() const { return max_abs_term_; }
    // Ratio of the largest term to the result; large values flag cancellation.
    double cancellation_ratio() const {
        const double v = std::abs(value());
        return max_abs_term_ / (v > 1e-300 ? v : 1e-300);
    }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
    double max_abs_term_ = 0.0;
};

}  // namespace nbrach::numerics
