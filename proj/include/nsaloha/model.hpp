#pragma once

#include <complex>
#include <functional>
#include <variant>

#include "nsaloha/errors.hpp"

namespace nsaloha {

// Laplace transform s -> E[exp(-sX)], evaluated on the right half plane
// and on the imaginary axis.
using LaplaceTransform = std::function<std::complex<double>(std::complex<double>)>;

// Path loss l(u) = (A u)^beta, optionally modified to remove the pole at
// the origin. All variants keep the power-law core, so the far-field
// behaviour (and hence the scale of every improper integral) is (A u)^beta.
struct PathLossModel {
    enum class Kind { PowerLaw, ClampedMax, Shifted, MinDistance };

    Kind kind = Kind::PowerLaw;
    double amplitude = 1.0;  // A, 1/meters
    double beta = 4.0;       // exponent, must be > 2
    double u0 = 1.0;         // meters, MinDistance only

    static PathLossModel power_law(double amplitude, double beta);
    static PathLossModel clamped_max(double amplitude, double beta);  // max(1, l(u))
    static PathLossModel shifted(double amplitude, double beta);      // l(u + 1)
    static PathLossModel min_distance(double amplitude, double beta, double u0);  // l(max(u, u0))
};

/// Attenuation l(u). Throws PoleAtOrigin for PowerLaw at u = 0.
double path_loss_eval(const PathLossModel& model, double u);

/// integral_R^inf u / l(u) du (closed form per variant); finite for beta > 2.
double path_loss_tail_moment(const PathLossModel& model, double R);

struct FadingModel {
    enum class Kind { Rayleigh, Deterministic, GenericLaplace };

    Kind kind = Kind::Rayleigh;
    double mu = 1.0;  // E[F] = 1/mu, must be finite and positive
    LaplaceTransform laplace;  // GenericLaplace only

    double mean() const { return 1.0 / mu; }

    static FadingModel rayleigh(double mu = 1.0);
    static FadingModel deterministic(double value = 1.0);
    static FadingModel generic(LaplaceTransform transform, double mean);

    /// L_F(s) for any variant.
    std::complex<double> laplace_at(std::complex<double> s) const;
};

struct NoiseModel {
    enum class Kind { Zero, DeterministicPower, GenericLaplace };

    Kind kind = Kind::Zero;
    double w = 0.0;  // power, DeterministicPower only
    LaplaceTransform laplace;

    static NoiseModel zero();
    static NoiseModel deterministic_power(double w);
    static NoiseModel generic(LaplaceTransform transform);

    std::complex<double> laplace_at(std::complex<double> s) const;
    double laplace_real(double s) const;
};

struct NetworkParams {
    double lambda = 1e-3;      // nodes per m^2 (>= 0; 0 models an empty network)
    double r = 31.6227766016837933;  // link distance, meters (sqrt(1000))
    double T = 10.0;           // SINR threshold
    PathLossModel path_loss{};
    FadingModel fading{};
    NoiseModel noise{};

    void validate() const;  // throws std::invalid_argument
};

// MAC configurations. B is the packet (or slot) duration in seconds.
struct SlottedMac {
    double p = 0.05;  // medium access probability
    double B = 1.0;
};

struct RenewalMac {
    double epsilon = 0.05;  // back-off rate, 1/seconds (mean back-off 1/epsilon)
    double B = 1.0;

    double epsilon_b() const { return epsilon * B; }
    static RenewalMac from_epsilon_b(double epsilon_b, double B = 1.0);
    /// Renewal MAC with channel occupation fraction tau = epsilon B / (1 + epsilon B).
    static RenewalMac from_tau(double tau, double B = 1.0);
};

struct RainMac {
    double lambda_s = 5e-5;  // transmission initiations per m^2 per second
    double B = 1.0;
};

using MacConfig = std::variant<SlottedMac, RenewalMac, RainMac>;

void validate(const MacConfig& mac);  // throws std::invalid_argument
double mac_duration(const MacConfig& mac);

/// Fraction of time a node occupies the channel: p for slotted,
/// epsilon B / (1 + epsilon B) for renewal. Throws NotDefinedForRain for the
/// rain model, which has no per-node notion.
double channel_occupation_fraction(const MacConfig& mac);

/// lambda_s matching a node density and occupation fraction: lambda_s = lambda tau / B.
double equivalent_rain_density(double lambda, double tau, double B);

/// Rain MAC carrying the same space-time density of channel occupation as
/// (lambda, mac).
RainMac to_equivalent_rain(double lambda, const MacConfig& mac);

}  // namespace nsaloha
