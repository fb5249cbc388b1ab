#include "nsaloha/estimate.hpp"

#include <stdexcept>

namespace nsaloha {

double wilson_halfwidth(long long successes, long long n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_halfwidth: n must be positive");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
}

Estimate bernoulli_estimate(long long successes, long long n) {
    if (n <= 0) throw std::invalid_argument("bernoulli_estimate: n must be positive");
    if (successes < 0 || successes > n)
        throw std::invalid_argument("bernoulli_estimate: successes out of range");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z = 1.959963984540054;
    double hw;
    if (successes < 10) {
        hw = wilson_halfwidth(successes, n, z);
    } else {
        hw = z * std::sqrt(p * (1.0 - p) / nn);
    }
    return {p, hw, n};
}

}  // namespace nsaloha
