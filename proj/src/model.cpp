#include "nsaloha/model.hpp"

#include <cmath>
#include <stdexcept>

namespace nsaloha {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double power_law(double amplitude, double beta, double u) {
    return std::pow(amplitude * u, beta);
}

}  // namespace

PathLossModel PathLossModel::power_law(double amplitude, double beta) {
    require(amplitude > 0.0, "PathLossModel: A must be positive");
    if (!(beta > 2.0)) throw DivergentConstant("PathLossModel: beta must exceed 2");
    return {Kind::PowerLaw, amplitude, beta, 1.0};
}

PathLossModel PathLossModel::clamped_max(double amplitude, double beta) {
    PathLossModel m = power_law(amplitude, beta);
    m.kind = Kind::ClampedMax;
    return m;
}

PathLossModel PathLossModel::shifted(double amplitude, double beta) {
    PathLossModel m = power_law(amplitude, beta);
    m.kind = Kind::Shifted;
    return m;
}

PathLossModel PathLossModel::min_distance(double amplitude, double beta, double u0) {
    require(u0 > 0.0, "PathLossModel: u0 must be positive");
    PathLossModel m = power_law(amplitude, beta);
    m.kind = Kind::MinDistance;
    m.u0 = u0;
    return m;
}

double path_loss_eval(const PathLossModel& model, double u) {
    require(u >= 0.0, "path_loss_eval: distance must be nonnegative");
    switch (model.kind) {
        case PathLossModel::Kind::PowerLaw:
            if (u == 0.0) throw PoleAtOrigin("path_loss_eval: power law has a pole at u = 0");
            return power_law(model.amplitude, model.beta, u);
        case PathLossModel::Kind::ClampedMax:
            return std::max(1.0, power_law(model.amplitude, model.beta, u));
        case PathLossModel::Kind::Shifted:
            return power_law(model.amplitude, model.beta, u + 1.0);
        case PathLossModel::Kind::MinDistance:
            return power_law(model.amplitude, model.beta, std::max(u, model.u0));
    }
    throw std::logic_error("path_loss_eval: unknown variant");
}

double path_loss_tail_moment(const PathLossModel& model, double R) {
    require(R > 0.0, "path_loss_tail_moment: R must be positive");
    const double A = model.amplitude;
    const double beta = model.beta;
    // integral_R^inf u (A u)^(-beta) du
    auto pure_tail = [&](double from) {
        return std::pow(A, -beta) * std::pow(from, 2.0 - beta) / (beta - 2.0);
    };
    switch (model.kind) {
        case PathLossModel::Kind::PowerLaw:
            return pure_tail(R);
        case PathLossModel::Kind::ClampedMax: {
            const double knee = 1.0 / A;  // (A u)^beta = 1
            if (R >= knee) return pure_tail(R);
            return 0.5 * (knee * knee - R * R) + pure_tail(knee);
        }
        case PathLossModel::Kind::Shifted: {
            // integral_R^inf u (A(u+1))^(-beta) du, v = u + 1
            const double v = R + 1.0;
            return std::pow(A, -beta) *
                   (std::pow(v, 2.0 - beta) / (beta - 2.0) - std::pow(v, 1.0 - beta) / (beta - 1.0));
        }
        case PathLossModel::Kind::MinDistance: {
            if (R >= model.u0) return pure_tail(R);
            const double l0 = power_law(A, beta, model.u0);
            return 0.5 * (model.u0 * model.u0 - R * R) / l0 + pure_tail(model.u0);
        }
    }
    throw std::logic_error("path_loss_tail_moment: unknown variant");
}

FadingModel FadingModel::rayleigh(double mu) {
    require(mu > 0.0 && std::isfinite(mu), "FadingModel: mu must be positive and finite");
    return {Kind::Rayleigh, mu, {}};
}

FadingModel FadingModel::deterministic(double value) {
    require(value > 0.0 && std::isfinite(value), "FadingModel: value must be positive and finite");
    return {Kind::Deterministic, 1.0 / value, {}};
}

FadingModel FadingModel::generic(LaplaceTransform transform, double mean) {
    require(mean > 0.0 && std::isfinite(mean), "FadingModel: mean must be positive and finite");
    require(static_cast<bool>(transform), "FadingModel: transform must be callable");
    return {Kind::GenericLaplace, 1.0 / mean, std::move(transform)};
}

std::complex<double> FadingModel::laplace_at(std::complex<double> s) const {
    switch (kind) {
        case Kind::Rayleigh:
            return mu / (mu + s);
        case Kind::Deterministic:
            return std::exp(-s / mu);
        case Kind::GenericLaplace:
            return laplace(s);
    }
    throw std::logic_error("FadingModel: unknown variant");
}

NoiseModel NoiseModel::zero() { return {Kind::Zero, 0.0, {}}; }

NoiseModel NoiseModel::deterministic_power(double w) {
    require(w >= 0.0, "NoiseModel: power must be nonnegative");
    return {Kind::DeterministicPower, w, {}};
}

NoiseModel NoiseModel::generic(LaplaceTransform transform) {
    require(static_cast<bool>(transform), "NoiseModel: transform must be callable");
    NoiseModel m{Kind::GenericLaplace, 0.0, std::move(transform)};
    // L_W(0) = 1 is the one property cheap enough to probe at construction.
    if (std::abs(m.laplace(0.0) - 1.0) > 1e-9)
        throw std::invalid_argument("NoiseModel: L_W(0) must equal 1");
    return m;
}

std::complex<double> NoiseModel::laplace_at(std::complex<double> s) const {
    switch (kind) {
        case Kind::Zero:
            return 1.0;
        case Kind::DeterministicPower:
            return std::exp(-s * w);
        case Kind::GenericLaplace:
            return laplace(s);
    }
    throw std::logic_error("NoiseModel: unknown variant");
}

double NoiseModel::laplace_real(double s) const { return laplace_at(s).real(); }

void NetworkParams::validate() const {
    require(lambda >= 0.0 && std::isfinite(lambda), "NetworkParams: lambda must be nonnegative");
    require(r > 0.0 && std::isfinite(r), "NetworkParams: r must be positive");
    require(T > 0.0 && std::isfinite(T), "NetworkParams: T must be positive");
    require(path_loss.amplitude > 0.0, "NetworkParams: path loss amplitude must be positive");
    if (!(path_loss.beta > 2.0)) throw DivergentConstant("NetworkParams: beta must exceed 2");
    require(fading.mu > 0.0 && std::isfinite(fading.mu), "NetworkParams: fading mean must be positive");
}

RenewalMac RenewalMac::from_epsilon_b(double epsilon_b, double B) {
    require(epsilon_b > 0.0, "RenewalMac: epsilon B must be positive");
    require(B > 0.0, "RenewalMac: B must be positive");
    return {epsilon_b / B, B};
}

RenewalMac RenewalMac::from_tau(double tau, double B) {
    require(tau > 0.0 && tau < 1.0, "RenewalMac: tau must lie in (0, 1)");
    return from_epsilon_b(tau / (1.0 - tau), B);
}

void validate(const MacConfig& mac) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            require(m.B > 0.0, "MacConfig: B must be positive");
            if constexpr (std::is_same_v<M, SlottedMac>) {
                require(m.p >= 0.0 && m.p <= 1.0, "MacConfig: p must lie in [0, 1]");
            } else if constexpr (std::is_same_v<M, RenewalMac>) {
                require(m.epsilon > 0.0, "MacConfig: epsilon must be positive");
            } else {
                require(m.lambda_s >= 0.0, "MacConfig: lambda_s must be nonnegative");
            }
        },
        mac);
}

double mac_duration(const MacConfig& mac) {
    return std::visit([](const auto& m) { return m.B; }, mac);
}

double channel_occupation_fraction(const MacConfig& mac) {
    if (std::holds_alternative<SlottedMac>(mac)) return std::get<SlottedMac>(mac).p;
    if (std::holds_alternative<RenewalMac>(mac)) {
        const auto& m = std::get<RenewalMac>(mac);
        const double eb = m.epsilon_b();
        return eb / (1.0 + eb);
    }
    throw NotDefinedForRain(
        "channel_occupation_fraction: the rain model has no per-node occupation fraction");
}

double equivalent_rain_density(double lambda, double tau, double B) {
    require(lambda >= 0.0, "equivalent_rain_density: lambda must be nonnegative");
    require(tau >= 0.0 && tau <= 1.0, "equivalent_rain_density: tau must lie in [0, 1]");
    require(B > 0.0, "equivalent_rain_density: B must be positive");
    return lambda * tau / B;
}

RainMac to_equivalent_rain(double lambda, const MacConfig& mac) {
    if (std::holds_alternative<RainMac>(mac)) return std::get<RainMac>(mac);
    const double B = mac_duration(mac);
    return {equivalent_rain_density(lambda, channel_occupation_fraction(mac), B), B};
}

}  // namespace nsaloha
