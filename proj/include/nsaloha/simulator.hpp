#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nsaloha/estimate.hpp"
#include "nsaloha/model.hpp"
#include "nsaloha/rng.hpp"

namespace nsaloha {

enum class Boundary { Torus, None, GuardMargin };
enum class SinrConstraint { MeanInterference, MaxInterference };

struct SimConfig {
    NetworkParams net{};
    MacConfig mac = SlottedMac{};
    double window_side = 1000.0;  // meters
    Boundary boundary = Boundary::Torus;
    double guard_margin = 100.0;  // meters, GuardMargin only
    long long replications = 10000;
    std::uint64_t rng_seed = 1;
    SinrConstraint constraint = SinrConstraint::MeanInterference;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// One interferer packet overlapping the observation window of the typical
/// transmission.
struct TransmissionEpisode {
    Point source{};
    Point receiver{};   // at distance |source - receiver| = B-field r
    double start = 0.0; // seconds, relative to the typical packet start
    double duration = 1.0;
    double fading_to_typical = 1.0;  // power units, channel toward the typical receiver
};

/// Stationary two-epoch law of a renewal interferer: R is the start of its
/// last packet at or before time 0, S the start of the first packet after 0.
/// Always S - R >= B.
struct RenewalEpochs {
    double r_epoch = 0.0;  // <= 0
    double s_epoch = 0.0;  // > 0
};

/// Piecewise-constant interference power at the typical receiver over one
/// packet duration [0, B].
class InterferenceTimeline {
  public:
    InterferenceTimeline() = default;

    /// Builds the timeline from packets; intervals are clipped to [0, B].
    /// Each event is (start, end, level).
    static InterferenceTimeline from_packets(
        const std::vector<std::array<double, 3>>& packets, double B);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& levels() const { return levels_; }
    double duration() const { return duration_; }

    double max_level() const;
    double time_average() const;

  private:
    std::vector<double> breakpoints_;  // strictly increasing, interior to (0, B)
    std::vector<double> levels_;       // breakpoints_.size() + 1 entries, >= 0
    double duration_ = 1.0;
};

/// Homogeneous Poisson point process of the given intensity on the rectangle
/// [x0, x1] x [y0, y1].
std::vector<Point> sample_ppp(double intensity, double x0, double y0, double x1, double y1,
                              RngEngine& rng);

/// Tent weight h(s) = (B - |s|)^+ / B: the fraction of the typical packet
/// [0, B] overlapped by an interferer packet starting at s.
double weight_h(double s, double B);

/// Exact draw from the stationary (R, S) law of a renewal interferer.
RenewalEpochs sample_renewal_interferer_epochs(double epsilon, double B, RngEngine& rng);

/// Deterministic mean of the interference arriving from outside the
/// simulation window (used by the Torus boundary to remove the finite-window
/// truncation bias).
double far_field_mean_interference(const SimConfig& cfg);

struct RepOutcome {
    double i_mean = 0.0;
    double i_max = 0.0;
    double fading = 0.0;
    double noise = 0.0;
    bool success_mean = false;
    bool success_max = false;
};

/// One replication, fully determined by (cfg.rng_seed, rep_index).
RepOutcome simulate_one(const SimConfig& cfg, long long rep_index);

struct RepDetail {
    RepOutcome outcome{};
    InterferenceTimeline timeline{};
    double i_mean_from_weights = 0.0;  // h-weighted sum, no far-field term
    std::vector<TransmissionEpisode> episodes{};
    Point receiver{};
};

RepDetail simulate_one_detailed(const SimConfig& cfg, long long rep_index);

/// Success probability estimate under cfg.constraint.
Estimate simulate(const SimConfig& cfg);
Estimate simulate_slotted(const SimConfig& cfg);
Estimate simulate_renewal(const SimConfig& cfg);
Estimate simulate_rain(const SimConfig& cfg);

struct PairedEstimate {
    Estimate mean_constraint{};
    Estimate max_constraint{};
    // Replications succeeding under the max constraint but not under the mean
    // one; zero by pathwise dominance (I_max >= I_mean on shared randomness).
    long long dominance_violations = 0;
};

/// Mean- and max-constraint estimates from the same random replications.
PairedEstimate simulate_paired(const SimConfig& cfg);

struct DensitySweepRow {
    double tau = 0.0;      // channel occupation fraction
    double control = 0.0;  // epsilon B (renewal), p (slotted) or lambda_s B (rain)
    double dsuc_mean = 0.0;
    double dsuc_max = 0.0;
    Estimate est_mean{};
    Estimate est_max{};
};

struct DensitySweepResult {
    std::vector<DensitySweepRow> rows;
    std::size_t argmax_mean = 0;
    std::size_t argmax_max = 0;
};

/// d_suc = lambda tau p_hat over a grid of occupation fractions; the MAC kind
/// of cfg.mac picks how tau is applied (p, epsilon B, or lambda_s B).
DensitySweepResult estimate_density_of_success(const SimConfig& cfg,
                                               const std::vector<double>& taus);

}  // namespace nsaloha
