#include "nsaloha/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nsaloha {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_beta(double beta) {
    if (!(beta > 2.0))
        throw DivergentConstant("path-loss exponent must exceed 2, the constants diverge");
}

void require_rayleigh(const NetworkParams& net) {
    if (net.fading.kind != FadingModel::Kind::Rayleigh)
        throw WrongFadingForClosedForm(
            "Rayleigh fading required here; use coverage_general_fading otherwise");
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

// Scale S with l(S) = target, by bisection on the monotone path loss. Used
// to normalize the improper radial integrals of non-power-law variants.
double radial_scale(const PathLossModel& l, double r, double target) {
    if (l.kind == PathLossModel::Kind::PowerLaw)
        return std::pow(target, 1.0 / l.beta) / l.amplitude;
    if (path_loss_eval(l, 0.0) >= target) return r;  // already above target everywhere
    double hi = r;
    for (int i = 0; i < 400 && path_loss_eval(l, hi) < target; ++i) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (path_loss_eval(l, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// integral_0^inf f(u) du as head [0, S] plus the tail mapped to (0, 1] via
// u = S / w. Integrands decay like u^(1 - beta) or faster, so the mapped
// tail is u-substitution friendly.
template <class F>
IntegrationResult<double> improper_radial(const F& f, double S, const QuadratureSettings& q) {
    auto head = integrate_adaptive<double>(f, 0.0, S, q);
    auto tail = integrate_adaptive<double>(
        [&](double w) {
            const double u = S / w;
            return f(u) * u / w;
        },
        0.0, 1.0, q);
    return {head.value + tail.value, head.est_error + tail.est_error,
            head.subdivisions + tail.subdivisions};
}

double noise_factor(const NetworkParams& net) {
    const double xi = net.fading.mu * net.T * path_loss_eval(net.path_loss, net.r);
    return net.noise.laplace_real(xi);
}

bool closed_form_regime(const NetworkParams& net) {
    return net.path_loss.kind == PathLossModel::Kind::PowerLaw;
}

// r^2 T^(2/beta), the scale every noiseless power-law exponent carries.
double exponent_scale(const NetworkParams& net) {
    return net.r * net.r * std::pow(net.T, 2.0 / net.path_loss.beta);
}

void require_noiseless_power_law(const NetworkParams& net) {
    require_rayleigh(net);
    require(net.path_loss.kind == PathLossModel::Kind::PowerLaw,
            "power-law path loss required for the closed-form tuning results");
    require(net.noise.kind == NoiseModel::Kind::Zero,
            "zero noise required for the closed-form tuning results");
}

}  // namespace

double k_beta(double beta) {
    require_beta(beta);
    return 2.0 * kPi * kPi / (beta * std::sin(2.0 * kPi / beta));
}

double k_beta_quadrature(double beta, const QuadratureSettings& q) {
    require_beta(beta);
    // 2 pi ( integral_0^1 v/(1+v^beta) dv + tail ), tail smoothed by
    // v = y^(-m) with m = 2/(beta-2) so the mapped integrand is regular.
    const double m = 2.0 / (beta - 2.0);
    auto head = integrate_adaptive<double>(
        [beta](double v) { return v / (1.0 + std::pow(v, beta)); }, 0.0, 1.0, q);
    auto tail = integrate_adaptive<double>(
        [beta, m](double y) { return m * y / (1.0 + std::pow(y, m * beta)); }, 0.0, 1.0, q);
    return 2.0 * kPi * (head.value + tail.value);
}

double k_prime_beta(double beta, const QuadratureSettings& q) {
    require_beta(beta);
    // Head: u = y^(beta/2) turns u^(2/beta-1) du into a constant, leaving a
    // bounded integrand. Tail: u = 1/w and then w = y^m with m = beta/(beta-2)
    // removes the endpoint singularity entirely.
    auto g = [](double u) {
        if (u < 1e-300) return 1.0;
        return one_minus_log1p_over(1.0 / u);
    };
    const double half_beta = 0.5 * beta;
    auto head = integrate_adaptive<double>(
        [&](double y) { return half_beta * g(std::pow(y, half_beta)); }, 0.0, 1.0, q);

    auto g_tilde = [](double w) { return one_minus_log1p_over(w) / w; };
    const double m = beta / (beta - 2.0);
    auto tail = integrate_adaptive<double>(
        [&](double y) { return m * g_tilde(std::pow(y, m)); }, 0.0, 1.0, q);

    return 4.0 * kPi / beta * (head.value + tail.value);
}

CoverageResult p_slot(const NetworkParams& net, const SlottedMac& mac,
                      const QuadratureSettings& q) {
    net.validate();
    require_rayleigh(net);
    require(mac.p >= 0.0 && mac.p <= 1.0, "p_slot: p must lie in [0, 1]");

    const double theta = net.T * path_loss_eval(net.path_loss, net.r);
    double exponent;
    double est_err;
    EvalMethod method;
    if (closed_form_regime(net)) {
        // The radial integral collapses exactly for the power law; noise only
        // enters through the L_W prefactor, which keeps the factorization
        // p = L_W(mu T l(r)) * p(W=0) exact.
        exponent = net.lambda * mac.p * exponent_scale(net) * k_beta(net.path_loss.beta);
        est_err = 0.0;
        method = net.noise.kind == NoiseModel::Kind::Zero ? EvalMethod::ClosedForm
                                                          : EvalMethod::Quadrature;
    } else {
        const double S = radial_scale(net.path_loss, net.r, theta);
        auto integral = improper_radial(
            [&](double u) { return u / (1.0 + path_loss_eval(net.path_loss, u) / theta); }, S, q);
        exponent = 2.0 * kPi * net.lambda * mac.p * integral.value;
        est_err = 2.0 * kPi * net.lambda * mac.p * integral.est_error;
        method = EvalMethod::Quadrature;
    }
    const double p = noise_factor(net) * std::exp(-exponent);
    return {clamp_probability(p), method, p * est_err};
}

namespace {

// exp factor of the rain-model mean-interference transform at ratio
// z = xi / (mu l(u)); the integrand carries 1 - log(1+z)/z.
template <class Scalar>
Scalar rain_radial_integral(const NetworkParams& net, Scalar xi, double scale_hint,
                            const QuadratureSettings& q, double* est_error) {
    const double mu = net.fading.mu;
    auto phi = [&](double u) {
        const double l = path_loss_eval(net.path_loss, u);
        return u * one_minus_log1p_over(xi / (mu * l));
    };
    if constexpr (std::is_same_v<Scalar, double>) {
        auto res = improper_radial(phi, scale_hint, q);
        if (est_error) *est_error = res.est_error;
        return res.value;
    } else {
        auto head = integrate_adaptive<Scalar>(phi, 0.0, scale_hint, q);
        auto tail = integrate_adaptive<Scalar>(
            [&](double w) {
                const double u = scale_hint / w;
                return phi(u) * u / w;
            },
            0.0, 1.0, q);
        if (est_error) *est_error = head.est_error + tail.est_error;
        return head.value + tail.value;
    }
}

}  // namespace

CoverageResult p_rain_mean(const NetworkParams& net, const RainMac& mac,
                           const QuadratureSettings& q) {
    net.validate();
    require_rayleigh(net);
    require(mac.lambda_s >= 0.0 && mac.B > 0.0, "p_rain_mean: invalid rain parameters");

    const double density = mac.lambda_s * mac.B;
    if (density == 0.0) return {noise_factor(net), EvalMethod::ClosedForm, 0.0};

    double exponent;
    double est_err;
    EvalMethod method;
    if (closed_form_regime(net)) {
        const double kp = k_prime_beta(net.path_loss.beta, q);
        exponent = density * exponent_scale(net) * kp;
        est_err = density * exponent_scale(net) * kp * q.rel_tol;
        method = net.noise.kind == NoiseModel::Kind::Zero ? EvalMethod::ClosedForm
                                                          : EvalMethod::Quadrature;
    } else {
        const double theta = net.T * path_loss_eval(net.path_loss, net.r);
        const double S = radial_scale(net.path_loss, net.r, theta);
        double integral_err = 0.0;
        const double integral =
            rain_radial_integral<double>(net, net.fading.mu * theta, S, q, &integral_err);
        exponent = 4.0 * kPi * density * integral;
        est_err = 4.0 * kPi * density * integral_err;
        method = EvalMethod::Quadrature;
    }
    const double p = noise_factor(net) * std::exp(-exponent);
    return {clamp_probability(p), method, p * est_err};
}

namespace {

// Success-probability exponent of the renewal model. Works in the
// dimensionless pair a = epsilon B and x = T l(r) / l(u): averaging over the
// stationary (R, S) epochs of one interferer gives
//   E(x) = a/(1+a) int_0^1 dsig/(1+(1-sig)x) *
//              [ e^(-a sig) + a int_0^sig e^(-a rho)/(1+(sig-rho)x) drho ]
//        + 1/(1+a)   [ e^(-a) + a int_0^1  e^(-a rho)/(1+(1-rho)x) drho ]
// and the outer radial integrand is u (1 - E(x(u))). Inner integrals use a
// fixed 64-point Gauss-Legendre rule on precomputed exponential tables; the
// outer improper integral stays adaptive.
class RenewalExponent {
  public:
    RenewalExponent(const NetworkParams& net, const RenewalMac& mac)
        : net_(net),
          a_(mac.epsilon * mac.B),
          theta_(net.T * path_loss_eval(net.path_loss, net.r)),
          rule_(gauss_legendre(64)) {
        const int n = static_cast<int>(rule_.nodes.size());
        sigma_.resize(n);
        w_.resize(n);
        exp_a_sigma_.resize(n);
        exp_table_.resize(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            sigma_[i] = 0.5 * (rule_.nodes[i] + 1.0);
            w_[i] = 0.5 * rule_.weights[i];
            exp_a_sigma_[i] = std::exp(-a_ * sigma_[i]);
        }
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                exp_table_[static_cast<std::size_t>(i) * n + k] =
                    std::exp(-a_ * sigma_[i] * sigma_[k]);
        exp_a_ = std::exp(-a_);
    }

    // 1 - E at x = T l(r) / l(u); linearized for tiny x where the direct
    // difference cancels below double precision (1 - E = x a/(1+a) + O(x^2)).
    double one_minus_mean_factor(double x) const {
        if (x < 1e-6) return x * a_ / (1.0 + a_);
        const int n = static_cast<int>(sigma_.size());
        double case1 = 0.0;
        double case2_integral = 0.0;
        for (int i = 0; i < n; ++i) {
            const double sig = sigma_[i];
            double inner = 0.0;  // int_0^sig e^(-a rho)/(1+(sig-rho)x) drho
            const double* row = exp_table_.data() + static_cast<std::size_t>(i) * n;
            for (int k = 0; k < n; ++k) {
                inner += w_[k] * row[k] / (1.0 + sig * (1.0 - sigma_[k]) * x);
            }
            inner *= sig;
            const double first = 1.0 / (1.0 + (1.0 - sig) * x);
            case1 += w_[i] * first * (exp_a_sigma_[i] + a_ * inner);
            case2_integral += w_[i] * exp_a_sigma_[i] * first;
        }
        const double e = (a_ * case1 + exp_a_ + a_ * case2_integral) / (1.0 + a_);
        return 1.0 - e;
    }

    double x_at(double u) const { return theta_ / path_loss_eval(net_.path_loss, u); }

    double radial(const QuadratureSettings& q, double* est_error) const {
        const double S = radial_scale(net_.path_loss, net_.r, theta_);
        auto f = [&](double u) { return u * one_minus_mean_factor(x_at(u)); };
        auto res = improper_radial(f, S, q);
        if (est_error) *est_error = res.est_error;
        return res.value;
    }

  private:
    const NetworkParams& net_;
    double a_;
    double theta_;
    const GaussLegendreRule& rule_;
    std::vector<double> sigma_, w_, exp_a_sigma_, exp_table_;
    double exp_a_ = 1.0;
};

}  // namespace

CoverageResult p_renewal_mean(const NetworkParams& net, const RenewalMac& mac,
                              const QuadratureSettings& q) {
    net.validate();
    require_rayleigh(net);
    require(mac.epsilon > 0.0 && mac.B > 0.0, "p_renewal_mean: invalid renewal parameters");

    RenewalExponent kernel(net, mac);
    double est_err = 0.0;
    const double integral = kernel.radial(q, &est_err);
    const double exponent = 2.0 * kPi * net.lambda * integral;
    const double p = noise_factor(net) * std::exp(-exponent);
    return {clamp_probability(p), EvalMethod::Quadrature,
            p * 2.0 * kPi * net.lambda * est_err};
}

double p_ns(double lambda, double epsilon, double B, double r, double T, double beta,
            const QuadratureSettings& q) {
    require(lambda >= 0.0 && B > 0.0 && r > 0.0 && T > 0.0, "p_ns: invalid parameters");
    require(epsilon >= 0.0, "p_ns: epsilon must be nonnegative");
    require_beta(beta);
    const double eb = epsilon * B;
    const double tau = eb / (1.0 + eb);  // = 1/(1 + 1/(epsilon B))
    const double exponent = lambda * tau * r * r * std::pow(T, 2.0 / beta) * k_prime_beta(beta, q);
    return std::exp(-exponent);
}

double laplace_interference_rain(double xi, const NetworkParams& net, const RainMac& mac,
                                 const QuadratureSettings& q) {
    net.validate();
    require_rayleigh(net);
    require(xi >= 0.0, "laplace_interference_rain: xi must be nonnegative");
    if (xi == 0.0) return 1.0;
    const double S = radial_scale(net.path_loss, net.r, xi / net.fading.mu);
    const double integral = rain_radial_integral<double>(net, xi, S, q, nullptr);
    return std::exp(-4.0 * kPi * mac.lambda_s * mac.B * integral);
}

std::complex<double> laplace_interference_rain(std::complex<double> xi,
                                               const NetworkParams& net, const RainMac& mac,
                                               const QuadratureSettings& q) {
    net.validate();
    require_rayleigh(net);
    require(xi.real() >= 0.0, "laplace_interference_rain: Re xi must be nonnegative");
    const double mag = std::abs(xi);
    if (mag == 0.0) return 1.0;
    const double S = radial_scale(net.path_loss, net.r, mag / net.fading.mu);
    const std::complex<double> integral =
        rain_radial_integral<std::complex<double>>(net, xi, S, q, nullptr);
    return std::exp(-4.0 * kPi * mac.lambda_s * mac.B * integral);
}

CoverageResult coverage_general_fading(const NetworkParams& net, const LaplaceTransform& L_I,
                                       const QuadratureSettings& q) {
    net.validate();
    require(static_cast<bool>(L_I), "coverage_general_fading: L_I must be callable");

    const double c = 2.0 * kPi * net.T * path_loss_eval(net.path_loss, net.r);
    const double mean_fading = net.fading.mean();
    const std::complex<double> i_unit(0.0, 1.0);

    auto integrand = [&](double s) -> double {
        if (std::abs(s) < 1e-300) return mean_fading;
        const std::complex<double> xi = i_unit * (c * s);
        const std::complex<double> a = L_I(xi) * net.noise.laplace_at(xi);
        const std::complex<double> b = net.fading.laplace_at(-2.0 * kPi * i_unit * s);
        const std::complex<double> g = a * (b - 1.0) / (2.0 * kPi * i_unit * s);
        return g.real();
    };

    // Symmetric truncation grown geometrically until two consecutive shells
    // stop contributing. Shells inside the fading-transform variation scale
    // never count as quiet, whatever their size.
    const double s0 = 10.0 / (path_loss_eval(net.path_loss, net.r) * net.T);
    const double s_min_stop = 100.0 * net.fading.mu;
    double integral = 0.0;
    double est_err = 0.0;
    double lo = 0.0;
    double hi = s0;
    int quiet_shells = 0;
    bool converged = false;
    for (int shell = 0; shell < 200; ++shell) {
        auto part = integrate_adaptive<double>(integrand, lo, hi, q);
        integral += part.value;
        est_err += part.est_error;
        if (hi >= s_min_stop && std::abs(part.value) < q.abs_tol)
            ++quiet_shells;
        else
            quiet_shells = 0;
        if (quiet_shells >= 2) {
            converged = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if (!converged)
        throw TailNotConverged("coverage_general_fading: truncation bound did not settle");

    // The transform route delivers P{F > X} - P{X = 0}/2 for X = T l(r)(I+W);
    // probe the transforms far out on the real axis to add the atom back.
    const double probe = 1e12 * net.fading.mu * net.T * path_loss_eval(net.path_loss, net.r);
    double atom = (L_I(probe) * net.noise.laplace_at(probe)).real();
    atom = std::clamp(atom, 0.0, 1.0);

    const double p = 2.0 * integral + 0.5 * atom;
    return {clamp_probability(p), EvalMethod::Quadrature, 2.0 * est_err};
}

OptimalTuning optimal_tau(const NetworkParams& net, const QuadratureSettings& q) {
    net.validate();
    require_noiseless_power_law(net);
    const double d = k_prime_beta(net.path_loss.beta, q) * exponent_scale(net);
    if (net.lambda * d > 1.0) {
        return {1.0 / (net.lambda * d), 1.0 / (std::numbers::e * d), false};
    }
    // Thin networks: transmit immediately, never back off (tau -> 1).
    return {std::numeric_limits<double>::infinity(), net.lambda * std::exp(-net.lambda * d),
            true};
}

OptimalTuning optimal_p(const NetworkParams& net, const QuadratureSettings&) {
    net.validate();
    require_noiseless_power_law(net);
    const double d = k_beta(net.path_loss.beta) * exponent_scale(net);
    if (net.lambda * d > 1.0) {
        return {1.0 / (net.lambda * d), 1.0 / (std::numbers::e * d), false};
    }
    return {std::numeric_limits<double>::infinity(), net.lambda * std::exp(-net.lambda * d),
            true};
}

namespace {

OptimalTuning optimal_r_impl(double lambda_tau, double T, double beta, double constant) {
    require(lambda_tau > 0.0, "optimal_r: lambda tau must be positive");
    require(T > 0.0, "optimal_r: T must be positive");
    const double scale = 2.0 * constant * std::pow(T, 2.0 / beta) * lambda_tau;
    const double r_max = 1.0 / std::sqrt(scale);
    // At r_max the exponent equals 1/2 identically.
    return {r_max, r_max * std::exp(-0.5), false};
}

}  // namespace

OptimalTuning optimal_r(double lambda_tau, double T, double beta, const QuadratureSettings& q) {
    require_beta(beta);
    return optimal_r_impl(lambda_tau, T, beta, k_prime_beta(beta, q));
}

OptimalTuning optimal_r_slotted(double lambda_tau, double T, double beta,
                                const QuadratureSettings&) {
    require_beta(beta);
    return optimal_r_impl(lambda_tau, T, beta, k_beta(beta));
}

double goodput_ratio(const NetworkParams& net, double tau, const QuadratureSettings& q) {
    net.validate();
    require(net.path_loss.kind == PathLossModel::Kind::PowerLaw,
            "goodput_ratio: power-law path loss required");
    require(tau >= 0.0 && tau <= 1.0, "goodput_ratio: tau must lie in [0, 1]");
    const double beta = net.path_loss.beta;
    const double gap = k_prime_beta(beta, q) - k_beta(beta);
    return std::exp(-gap * net.lambda * exponent_scale(net) * tau);
}

double optimized_goodput_ratio(double beta, const QuadratureSettings& q) {
    require_beta(beta);
    return k_beta(beta) / k_prime_beta(beta, q);
}

double optimized_progress_ratio(double beta, const QuadratureSettings& q) {
    return std::sqrt(optimized_goodput_ratio(beta, q));
}

}  // namespace nsaloha
