#pragma once

#include <cmath>
#include <cstdint>

namespace nsaloha {

/// Monte Carlo point estimate with a 95% confidence half-width.
struct Estimate {
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
    long long n = 0;

    bool ci_contains(double value) const {
        return std::abs(value - mean) <= ci95_halfwidth;
    }
};

/// Half-width of the 95% Wilson score interval.
double wilson_halfwidth(long long successes, long long n, double z = 1.959963984540054);

/// Estimate for a Bernoulli success count: normal-approximation CI, Wilson
/// when fewer than 10 successes were seen.
Estimate bernoulli_estimate(long long successes, long long n);

}  // namespace nsaloha
