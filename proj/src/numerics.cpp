#include "tpn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace tpn::num {

double std_normal_pdf(double z) {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double std_normal_cdf(double z) {
    // Phi(z) = erfc(-z/sqrt(2))/2; erfc keeps relative accuracy deep into
    // the lower tail where 1 - Phi-style formulas would cancel.
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

namespace {

// Rational approximation for the inverse normal CDF (P. Acklam's algorithm),
// evaluated on the lower half only; the caller reflects the upper half.
double quantile_lower_half(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};

    double z;
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    // One Halley step against the CDF takes the ~1e-9 rational error to
    // machine level.
    const double e = std_normal_cdf(z) - p;
    const double dens = std_normal_pdf(z);
    if (dens > 0.0) {
        const double u = e / dens;
        z -= u / (1.0 + 0.5 * z * u);
    }
    return z;
}

} // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        raise("domain-error", "std_normal_quantile requires p in (0,1)");
    if (p == 0.5) return 0.0;
    // For p > 1/2 the subtraction 1-p is exact, so the reflection makes the
    // function odd around the median by construction.
    if (p > 0.5) return -quantile_lower_half(1.0 - p);
    return quantile_lower_half(p);
}

double ln_gamma(double x) {
    if (!(x > 0.0)) raise("domain-error", "ln_gamma requires x > 0");
    return std::lgamma(x);
}

namespace {

// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    const double lg = std::lgamma(a);
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * std::numeric_limits<double>::epsilon())
            return sum * std::exp(-x + a * std::log(x) - lg);
    }
    raise("max-iterations", "incomplete gamma series did not converge");
}

// Continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz).
double gamma_q_cf(double a, double x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double fpmin = std::numeric_limits<double>::min() / eps;
    const double lg = std::lgamma(a);
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= eps)
            return std::exp(-x + a * std::log(x) - lg) * h;
    }
    raise("max-iterations", "incomplete gamma continued fraction did not converge");
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        raise("domain-error", "gamma_p requires a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0))
        raise("domain-error", "gamma_q requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

namespace {

// 15-point Kronrod nodes on [0,1] half-interval with the embedded 7-point
// Gauss rule (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkEstimate {
    double value;
    double error;
};

GkEstimate gauss_kronrod_15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    return {kron * h, std::fabs((kron - gauss) * h)};
}

struct Segment {
    double error;
    double value;
    double lo;
    double hi;
    bool operator<(const Segment& o) const { return error < o.error; }
};

double adaptive(const std::function<double(double)>& f, double lo, double hi,
                const QuadratureSpec& spec) {
    std::priority_queue<Segment> work;
    const GkEstimate first = gauss_kronrod_15(f, lo, hi);
    double total = first.value;
    double err = first.error;
    double finalized = 0.0;
    work.push({first.error, first.value, lo, hi});

    int splits = 0;
    const double tiny = 64.0 * std::numeric_limits<double>::epsilon();
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total + finalized))) {
        if (work.empty() || splits >= spec.max_subdivisions)
            raise("tolerance-not-reached",
                  "quadrature tolerance not met after " + std::to_string(splits) +
                      " subdivisions");
        const Segment s = work.top();
        work.pop();
        const double mid = 0.5 * (s.lo + s.hi);
        if (!(mid > s.lo && mid < s.hi) ||
            (s.hi - s.lo) <= tiny * (std::fabs(s.lo) + std::fabs(s.hi))) {
            // Interval no longer splittable; accept its value as-is.
            finalized += s.value;
            total -= s.value;
            err -= s.error;
            continue;
        }
        const GkEstimate l = gauss_kronrod_15(f, s.lo, mid);
        const GkEstimate r = gauss_kronrod_15(f, mid, s.hi);
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        work.push({l.error, l.value, s.lo, mid});
        work.push({r.error, r.value, mid, s.hi});
        ++splits;
    }
    return total + finalized;
}

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1)
        raise("domain-error", "invalid QuadratureSpec");
    if (!(lo < hi)) raise("domain-error", "integrate requires lo < hi");

    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) return adaptive(f, lo, hi, spec);

    // Map infinite ranges onto finite ones; the transformed integrand is set
    // to zero once x overflows, which is harmless for convergent integrals.
    auto guarded = [&f](double x, double w) {
        if (!std::isfinite(x)) return 0.0;
        const double v = f(x) * w;
        return std::isfinite(v) ? v : 0.0;
    };
    if (lo_inf && hi_inf) {
        auto g = [&](double t) {
            const double om = 1.0 - t * t;
            return guarded(t / om, (1.0 + t * t) / (om * om));
        };
        return adaptive(g, -1.0, 1.0, spec);
    }
    if (hi_inf) {
        auto g = [&](double t) {
            const double om = 1.0 - t;
            return guarded(lo + t / om, 1.0 / (om * om));
        };
        return adaptive(g, 0.0, 1.0, spec);
    }
    auto g = [&](double t) {
        const double om = 1.0 - t;
        return guarded(hi - t / om, 1.0 / (om * om));
    };
    return adaptive(g, 0.0, 1.0, spec);
}

double find_root(const std::function<double(double)>& f, RootBracket bracket,
                 double tol, int max_iter) {
    double a = bracket.lo;
    double b = bracket.hi;
    if (!(a < b)) raise("domain-error", "find_root requires lo < hi");
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        raise("no-sign-change", "find_root requires a sign change over the bracket");

    // Brent's method: b is the current best iterate, [a,b] or [b,a] always
    // brackets the root.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                            0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    raise("max-iterations", "find_root failed to converge");
}

MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& f,
                        std::vector<double> start, double tol, int max_iter) {
    const std::size_t n = start.size();
    if (n == 0) raise("domain-error", "minimize requires a nonempty start point");
    if (max_iter <= 0) max_iter = 400 * static_cast<int>(n);

    auto eval = [&f](const std::vector<double>& x) {
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    const double f0 = eval(start);
    if (!std::isfinite(f0)) raise("domain-error", "objective not finite at start");

    std::vector<std::vector<double>> simplex(n + 1, start);
    std::vector<double> fv(n + 1);
    fv[0] = f0;
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += (start[i] != 0.0) ? 0.05 * std::fabs(start[i]) : 0.00025;
        fv[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    MinimizeResult res;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&fv](std::size_t i, std::size_t j) { return fv[i] < fv[j]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (fv[worst] - fv[best] <= tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
        }
        for (double& cj : centroid) cj /= static_cast<double>(n);

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
            return x;
        };

        std::vector<double> xr = blend(-1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            simplex[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            std::vector<double> xc = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fcv = eval(xc);
            if (fcv < std::min(fr, fv[worst])) {
                simplex[worst] = std::move(xc);
                fv[worst] = fcv;
            } else {
                // Shrink toward the best vertex.
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[best][j] +
                                        0.5 * (simplex[i][j] - simplex[best][j]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    res.point = simplex[best];
    res.value = fv[best];
    res.iterations = iter;
    return res;
}

} // namespace tpn::num
