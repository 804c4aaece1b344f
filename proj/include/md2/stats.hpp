#pragma once
// Minimal frequentist toolbox for playtest reports: Welch's unequal-variance
// t-test, normal-approximation 95% confidence intervals, and Pearson
// correlation with the exact t-transform p-value. Two-tailed Student-t tail
// probabilities come from the regularized incomplete beta function, computed
// with the standard continued fraction (modified Lentz).

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>

namespace md2 {

namespace detail {

// Continued fraction for I_x(a, b) (Lentz's algorithm).
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-10;  // absolute tolerance of the expansion
    constexpr int max_iter = 500;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a, b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Two-tailed Student-t tail probability for a given statistic and df.
inline double student_t_two_tailed(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("student t: df must be > 0");
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct SampleStats {
    double mean = 0.0;
    double variance = 0.0;  // sample variance, n - 1 denominator
    std::size_t n = 0;
};

inline SampleStats sample_stats(std::span<const double> xs) {
    SampleStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / double(s.n);
    if (s.n < 2) return s;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / double(s.n - 1);
    return s;
}

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Welch's unequal-variance t-test with the Welch-Satterthwaite df. Zero
// variance on both sides is degenerate: equal means report p = 1, unequal
// means report p = 0 (the difference is exact).
inline WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");
    }
    SampleStats sa = sample_stats(a), sb = sample_stats(b);
    WelchResult r;
    double va_n = sa.variance / double(sa.n);
    double vb_n = sb.variance / double(sb.n);
    if (va_n + vb_n == 0.0) {
        r.df = double(sa.n + sb.n - 2);
        if (sa.mean == sb.mean) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = sa.mean > sb.mean ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = (sa.mean - sb.mean) / std::sqrt(va_n + vb_n);
    r.df = (va_n + vb_n) * (va_n + vb_n) /
           (va_n * va_n / double(sa.n - 1) + vb_n * vb_n / double(sb.n - 1));
    r.p = student_t_two_tailed(r.t, r.df);
    return r;
}

struct CiResult {
    double mean = 0.0;
    double half_width = 0.0;
};

// Normal-approximation 95% interval: mean +/- 1.96 * sd / sqrt(n).
inline CiResult ci95(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("ci95: need at least 2 values");
    SampleStats s = sample_stats(xs);
    return CiResult{s.mean, 1.96 * std::sqrt(s.variance) / std::sqrt(double(s.n))};
}

struct PearsonResult {
    double r = 0.0;
    double p = 0.0;
};

// Pearson correlation with the exact t-transform p-value on n - 2 df.
// Constant inputs have no defined correlation and are rejected.
inline PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    SampleStats sx = sample_stats(x), sy = sample_stats(y);
    if (sx.variance == 0.0 || sy.variance == 0.0) {
        throw std::invalid_argument("pearson: zero variance input");
    }
    double cov = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) cov += (x[i] - sx.mean) * (y[i] - sy.mean);
    cov /= double(x.size() - 1);
    PearsonResult res;
    res.r = cov / std::sqrt(sx.variance * sy.variance);
    if (res.r > 1.0) res.r = 1.0;
    if (res.r < -1.0) res.r = -1.0;
    double df = double(x.size() - 2);
    if (std::abs(res.r) >= 1.0) {
        res.p = 0.0;
        return res;
    }
    double t = res.r * std::sqrt(df / (1.0 - res.r * res.r));
    res.p = student_t_two_tailed(t, df);
    return res;
}

}  // namespace md2
