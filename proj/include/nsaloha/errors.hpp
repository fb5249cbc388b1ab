#pragma once

#include <stdexcept>
#include <string>

namespace nsaloha {

// Requesting a per-node quantity from the rain model, which has none.
struct NotDefinedForRain : std::domain_error {
    using std::domain_error::domain_error;
};

// Power-law path loss evaluated at u = 0.
struct PoleAtOrigin : std::domain_error {
    using std::domain_error::domain_error;
};

// K(beta) / K'(beta) requested with beta <= 2.
struct DivergentConstant : std::domain_error {
    using std::domain_error::domain_error;
};

// Rayleigh-only closed form requested with another fading model.
struct WrongFadingForClosedForm : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Plancherel-Parseval truncation did not settle within budget.
struct TailNotConverged : QuadratureFailure {
    using QuadratureFailure::QuadratureFailure;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nsaloha
