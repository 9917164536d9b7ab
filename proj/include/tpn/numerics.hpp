#pragma once

#include <functional>
#include <vector>

#include "tpn/error.hpp"

namespace tpn::num {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;  // sqrt(2*pi)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal density phi(z).
double std_normal_pdf(double z);

/// Standard normal CDF Phi(z), absolute error below 1e-15.
double std_normal_cdf(double z);

/// Inverse standard normal CDF. Rational initial guess polished by one
/// Halley step, so |Phi(result) - p| <= 1e-12. Odd around p = 1/2 by
/// construction. Throws "domain-error" for p outside (0,1).
double std_normal_quantile(double p);

/// log Gamma(x) for x > 0. Throws "domain-error" otherwise.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
};

/// Globally adaptive Gauss-Kronrod (G7,K15) integration of f over (lo, hi).
/// Either limit may be infinite; infinite ranges are mapped to a finite
/// interval by a rational change of variable before subdividing.
/// Throws "tolerance-not-reached" if max_subdivisions is exhausted.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

struct RootBracket {
    double lo;
    double hi;
};

/// Brent-style safeguarded root finding. The iterate never leaves the
/// initial bracket. Throws "no-sign-change" if f(lo) and f(hi) have the
/// same sign, "max-iterations" on failure to converge.
double find_root(const std::function<double(double)>& f, RootBracket bracket,
                 double tol = 1e-12, int max_iter = 200);

struct MinimizeResult {
    std::vector<double> point;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimization. `tol` is an absolute tolerance
/// on the spread of objective values across the simplex. Non-convergence is
/// reported through the `converged` flag rather than an exception.
MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& f,
                        std::vector<double> start, double tol = 1e-10,
                        int max_iter = 0);

} // namespace tpn::num
