#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "nsaloha/errors.hpp"

namespace nsaloha {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSettings: tolerances must be positive, max_subdivisions >= 1");
    }
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK dqk15 constants).
inline constexpr double gk_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
void gk15(const F& f, double a, double b, T& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    T f_mid = f(mid);
    T result_gauss = gk_wg[3] * f_mid;
    T result_kronrod = gk_wk[7] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_x[i];
        T sum = f(mid + dx) + f(mid - dx);
        result_kronrod += gk_wk[i] * sum;
        if (i % 2 == 1) result_gauss += gk_wg[i / 2] * sum;
    }
    value = result_kronrod * half;
    double diff = magnitude((result_kronrod - result_gauss) * half);
    // QUADPACK-style sharpening: reward segments where Gauss and Kronrod agree.
    double scaled = 200.0 * diff;
    error = std::min(diff, scaled * std::sqrt(scaled));
}

}  // namespace detail

template <class T>
struct IntegrationResult {
    T value{};
    double est_error = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]. T may be
/// double or std::complex<double>. Throws QuadratureFailure if the error
/// target is not met within settings.max_subdivisions segments.
template <class T = double, class F>
IntegrationResult<T> integrate_adaptive(const F& f, double a, double b,
                                        const QuadratureSettings& settings = {}) {
    settings.validate();

    struct Segment {
        double a, b;
        T value;
        double error;
        bool operator<(const Segment& o) const { return error < o.error; }
    };

    std::priority_queue<Segment> queue;
    Segment first{a, b, T{}, 0.0};
    detail::gk15<T>(f, a, b, first.value, first.error);
    queue.push(first);

    T total = first.value;
    double total_error = first.error;
    int segments = 1;

    while (total_error > std::max(settings.abs_tol, settings.rel_tol * detail::magnitude(total))) {
        if (segments >= settings.max_subdivisions)
            throw QuadratureFailure("integrate_adaptive: subdivision budget exhausted");
        Segment worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_error -= worst.error;

        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw QuadratureFailure("integrate_adaptive: interval underflow, integrand too singular");
        Segment left{worst.a, mid, T{}, 0.0};
        Segment right{mid, worst.b, T{}, 0.0};
        detail::gk15<T>(f, left.a, left.b, left.value, left.error);
        detail::gk15<T>(f, right.a, right.b, right.value, right.error);
        total += left.value + right.value;
        total_error += left.error + right.error;
        queue.push(left);
        queue.push(right);
        ++segments;
    }

    return {total, total_error, segments};
}

/// n-point Gauss-Legendre rule on [-1, 1]; nodes and weights computed by
/// Newton iteration and cached per n.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int n);

/// 1 - log(1 + z)/z, series-protected near z = 0 where the direct form
/// cancels catastrophically. Controls the tails of every mean-interference
/// integral; for small z it behaves like z/2 - z^2/3.
template <class T>
T one_minus_log1p_over(T z) {
    if (detail::magnitude(z) < 1e-4) {
        return z * (0.5 + z * (-1.0 / 3.0 + z * (0.25 - 0.2 * z)));
    }
    if constexpr (std::is_same_v<T, double>) {
        return 1.0 - std::log1p(z) / z;
    } else {
        return T{1.0} - std::log(T{1.0} + z) / z;
    }
}

}  // namespace nsaloha
