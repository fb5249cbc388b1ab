#pragma once

#include <complex>

#include "nsaloha/model.hpp"
#include "nsaloha/quadrature.hpp"

namespace nsaloha {

enum class EvalMethod { ClosedForm, Quadrature };

struct CoverageResult {
    double probability = 0.0;  // in [0, 1]
    EvalMethod method = EvalMethod::ClosedForm;
    double est_abs_error = 0.0;
};

struct OptimalTuning {
    double control = 0.0;         // tau_max, p_max or r_max; +inf when no_backoff
    double objective_value = 0.0; // density of successful transmissions, or progress in meters
    bool no_backoff = false;      // "transmit immediately, never back off" regime
};

/// Slotted-Aloha outage constant K(beta) = 2 pi^2 / (beta sin(2 pi / beta)).
/// Throws DivergentConstant for beta <= 2.
double k_beta(double beta);

/// Independent route to K(beta): 2 pi * integral_0^inf u/(1+u^beta) du by
/// adaptive quadrature.
double k_beta_quadrature(double beta, const QuadratureSettings& settings = {});

/// Non-slotted outage constant
/// K'(beta) = 4 pi / beta * integral_0^inf u^(2/beta - 1) (1 - u log(1 + 1/u)) du.
double k_prime_beta(double beta, const QuadratureSettings& settings = {});

/// Success probability of slotted Aloha (Rayleigh fading). Closed form for
/// power-law path loss without noise, otherwise quadrature of the shot-noise
/// exponent times L_W(mu T l(r)).
CoverageResult p_slot(const NetworkParams& net, const SlottedMac& mac,
                      const QuadratureSettings& settings = {});

/// Success probability of the Poisson rain model under the mean-interference
/// constraint (Rayleigh fading).
CoverageResult p_rain_mean(const NetworkParams& net, const RainMac& mac,
                           const QuadratureSettings& settings = {});

/// Success probability of the Poisson-renewal model under the
/// mean-interference constraint (Rayleigh fading). Always quadrature: the
/// radial integral is adaptive, the two inner time integrals use a fixed
/// 64-point Gauss-Legendre rule.
CoverageResult p_renewal_mean(const NetworkParams& net, const RenewalMac& mac,
                              const QuadratureSettings& settings = {});

/// Non-slotted success probability in the noiseless power-law regime,
/// exp(-lambda/(1 + 1/(epsilon B)) r^2 T^(2/beta) K'(beta)); the rain formula
/// driven by renewal parameters through the fair-comparison linkage.
double p_ns(double lambda, double epsilon, double B, double r, double T, double beta,
            const QuadratureSettings& settings = {});

/// Laplace transform of the mean interference in the rain model at real
/// xi >= 0 (Rayleigh fading with rate mu).
double laplace_interference_rain(double xi, const NetworkParams& net, const RainMac& mac,
                                 const QuadratureSettings& settings = {});

/// Same transform continued to complex xi with Re xi >= 0 (used along the
/// imaginary axis by coverage_general_fading).
std::complex<double> laplace_interference_rain(std::complex<double> xi,
                                               const NetworkParams& net, const RainMac& mac,
                                               const QuadratureSettings& settings = {});

/// Success probability for a general fading distribution via the
/// Plancherel-Parseval route: a symmetric truncated integral of
/// L_I(2 i pi l(r) T s) L_W(2 i pi l(r) T s) (L_F(-2 i pi s) - 1)/(2 i pi s),
/// grown until the tail stops contributing. Requires fading with a finite
/// mean and a square-integrable density (documented, not checked). Throws
/// TailNotConverged when the truncation bound keeps moving.
CoverageResult coverage_general_fading(const NetworkParams& net, const LaplaceTransform& L_I,
                                       const QuadratureSettings& settings = {});

/// Occupation fraction maximizing the density of successful transmissions
/// lambda tau p_ns (noiseless power-law regime).
OptimalTuning optimal_tau(const NetworkParams& net, const QuadratureSettings& settings = {});

/// Slotted companion of optimal_tau: same formulas with K(beta).
OptimalTuning optimal_p(const NetworkParams& net, const QuadratureSettings& settings = {});

/// Transmission distance maximizing the mean progress r p_c at fixed
/// space-time access density lambda tau. Non-slotted: K'(beta).
OptimalTuning optimal_r(double lambda_tau, double T, double beta,
                        const QuadratureSettings& settings = {});
/// Slotted companion: K(beta).
OptimalTuning optimal_r_slotted(double lambda_tau, double T, double beta,
                                const QuadratureSettings& settings = {});

/// Goodput of non-slotted relative to slotted Aloha at equal tuning tau:
/// exp(-(K'(beta) - K(beta)) lambda r^2 T^(2/beta) tau).
double goodput_ratio(const NetworkParams& net, double tau,
                     const QuadratureSettings& settings = {});

/// The same ratio when both schemes are individually optimized: K(beta)/K'(beta).
double optimized_goodput_ratio(double beta, const QuadratureSettings& settings = {});

/// Ratio of optimal mean progress, sqrt(K(beta)/K'(beta)).
double optimized_progress_ratio(double beta, const QuadratureSettings& settings = {});

}  // namespace nsaloha
