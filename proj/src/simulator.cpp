#include "nsaloha/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "nsaloha/quadrature.hpp"

namespace nsaloha {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double wrap_coordinate(double v, double side) {
    v = std::fmod(v, side);
    return v < 0.0 ? v + side : v;
}

double distance(const Point& a, const Point& b, Boundary boundary, double side) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (boundary == Boundary::Torus) {
        dx = std::min(dx, side - dx);
        dy = std::min(dy, side - dy);
    }
    return std::hypot(dx, dy);
}

double sample_fading(const FadingModel& fading, RngEngine& rng) {
    switch (fading.kind) {
        case FadingModel::Kind::Rayleigh: {
            std::exponential_distribution<double> dist(fading.mu);
            return dist(rng);
        }
        case FadingModel::Kind::Deterministic:
            return 1.0 / fading.mu;
        case FadingModel::Kind::GenericLaplace:
            throw std::invalid_argument(
                "simulator: generic-transform fading cannot be sampled; use Rayleigh or "
                "Deterministic");
    }
    throw std::logic_error("sample_fading: unknown variant");
}

double sample_noise(const NoiseModel& noise) {
    switch (noise.kind) {
        case NoiseModel::Kind::Zero:
            return 0.0;
        case NoiseModel::Kind::DeterministicPower:
            return noise.w;
        case NoiseModel::Kind::GenericLaplace:
            throw std::invalid_argument(
                "simulator: generic-transform noise cannot be sampled; use Zero or a "
                "deterministic power");
    }
    throw std::logic_error("sample_noise: unknown variant");
}

struct SampleRegion {
    double x0, y0, x1, y1;
    double area() const { return (x1 - x0) * (y1 - y0); }
};

SampleRegion interferer_region(const SimConfig& cfg) {
    if (cfg.boundary == Boundary::GuardMargin) {
        const double m = cfg.guard_margin;
        return {-m, -m, cfg.window_side + m, cfg.window_side + m};
    }
    return {0.0, 0.0, cfg.window_side, cfg.window_side};
}

}  // namespace

void SimConfig::validate() const {
    net.validate();
    nsaloha::validate(mac);
    require(window_side > 0.0, "SimConfig: window_side must be positive");
    require(replications >= 1, "SimConfig: replications must be >= 1");
    if (boundary == Boundary::GuardMargin) {
        require(guard_margin >= 0.0, "SimConfig: guard_margin must be nonnegative");
        require(window_side > 2.0 * net.r, "SimConfig: window_side must exceed 2 r under GuardMargin");
    }
    require(threads >= 0, "SimConfig: threads must be nonnegative");
}

InterferenceTimeline InterferenceTimeline::from_packets(
    const std::vector<std::array<double, 3>>& packets, double B) {
    InterferenceTimeline tl;
    tl.duration_ = B;

    // Accumulate +level at the clipped start, -level at the clipped end.
    std::vector<std::pair<double, double>> events;
    events.reserve(2 * packets.size());
    for (const auto& pk : packets) {
        const double start = std::max(pk[0], 0.0);
        const double end = std::min(pk[1], B);
        if (!(end > start)) continue;
        events.emplace_back(start, pk[2]);
        events.emplace_back(end, -pk[2]);
    }
    std::sort(events.begin(), events.end());

    double level = 0.0;
    double t = 0.0;
    std::vector<double> breakpoints;
    std::vector<double> levels;
    std::size_t i = 0;
    while (i < events.size()) {
        const double when = events[i].first;
        double delta = 0.0;
        while (i < events.size() && events[i].first == when) {
            delta += events[i].second;
            ++i;
        }
        if (when > t && when < B) {
            breakpoints.push_back(when);
            levels.push_back(level);
            t = when;
        }
        level += delta;
    }
    levels.push_back(std::max(level, 0.0));
    // Rounding can leave a slightly negative level after the last end event.
    for (double& l : levels) l = std::max(l, 0.0);
    tl.breakpoints_ = std::move(breakpoints);
    tl.levels_ = std::move(levels);
    return tl;
}

double InterferenceTimeline::max_level() const {
    double m = 0.0;
    for (double l : levels_) m = std::max(m, l);
    return m;
}

double InterferenceTimeline::time_average() const {
    double sum = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        sum += levels_[i] * (breakpoints_[i] - prev);
        prev = breakpoints_[i];
    }
    sum += levels_.back() * (duration_ - prev);
    return sum / duration_;
}

std::vector<Point> sample_ppp(double intensity, double x0, double y0, double x1, double y1,
                              RngEngine& rng) {
    require(intensity >= 0.0, "sample_ppp: intensity must be nonnegative");
    require(x1 >= x0 && y1 >= y0, "sample_ppp: empty region");
    const double mean = intensity * (x1 - x0) * (y1 - y0);
    std::vector<Point> points;
    if (mean == 0.0) return points;
    std::poisson_distribution<long long> count_dist(mean);
    const long long count = count_dist(rng);
    points.reserve(static_cast<std::size_t>(count));
    std::uniform_real_distribution<double> ux(x0, x1);
    std::uniform_real_distribution<double> uy(y0, y1);
    for (long long i = 0; i < count; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        points.push_back({x, y});
    }
    return points;
}

double weight_h(double s, double B) {
    return std::max(0.0, B - std::abs(s)) / B;
}

RenewalEpochs sample_renewal_interferer_epochs(double epsilon, double B, RngEngine& rng) {
    require(epsilon > 0.0 && B > 0.0, "sample_renewal_interferer_epochs: need epsilon > 0, B > 0");
    const double eb = epsilon * B;
    const double tau = eb / (1.0 + eb);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::exponential_distribution<double> backoff(epsilon);
    if (uniform(rng) < tau) {
        // Transmitting at time 0: the packet age is uniform on [0, B), and a
        // fresh back-off follows the packet.
        const double r = -B * uniform(rng);
        const double s = r + B + backoff(rng);
        return {r, s};
    }
    // Backing off at time 0: age and residual of the exponential back-off are
    // independent exponentials.
    const double r = -(B + backoff(rng));
    const double s = backoff(rng);
    return {r, s};
}

double far_field_mean_interference(const SimConfig& cfg) {
    // Mean of the shot noise arriving from outside the window, integrated in
    // polar coordinates over the exterior of the centred square:
    //   8 int_0^{pi/4} int_{w/(2 cos t)}^inf u / l(u) du dt
    // times the active transmitter density and the mean fading.
    double active_density = 0.0;
    if (std::holds_alternative<RainMac>(cfg.mac)) {
        const auto& m = std::get<RainMac>(cfg.mac);
        active_density = m.lambda_s * m.B;
    } else {
        active_density = cfg.net.lambda * channel_occupation_fraction(cfg.mac);
    }
    if (active_density == 0.0) return 0.0;

    const double half = 0.5 * cfg.window_side;
    auto res = integrate_adaptive<double>(
        [&](double t) { return path_loss_tail_moment(cfg.net.path_loss, half / std::cos(t)); },
        0.0, std::numbers::pi / 4.0, QuadratureSettings{1e-10, 1e-15, 2000});
    return active_density * cfg.net.fading.mean() * 8.0 * res.value;
}

namespace {

struct RepScratch {
    std::vector<std::array<double, 3>> packets;  // start, end, level
    std::vector<TransmissionEpisode> episodes;
    bool want_episodes = false;
};

// Core of one replication: the typical transmitter sits at the window centre
// with its receiver at distance r and uniform angle, and transmits on [0, B].
// Interference is gathered from the MAC-specific packet pattern.
// far_compensation is the deterministic exterior mean added under Torus.
RepOutcome run_replication(const SimConfig& cfg, long long rep_index, RepScratch* scratch,
                           Point* receiver_out, double far_compensation) {
    RngEngine rng = replication_stream(cfg.rng_seed, static_cast<std::uint64_t>(rep_index));

    const double side = cfg.window_side;
    const Point center{0.5 * side, 0.5 * side};
    std::uniform_real_distribution<double> angle_dist(0.0, kTwoPi);
    const double angle = angle_dist(rng);
    Point receiver{wrap_coordinate(center.x + cfg.net.r * std::cos(angle), side),
                   wrap_coordinate(center.y + cfg.net.r * std::sin(angle), side)};
    if (cfg.boundary != Boundary::Torus) {
        receiver = {center.x + cfg.net.r * std::cos(angle),
                    center.y + cfg.net.r * std::sin(angle)};
    }
    if (receiver_out) *receiver_out = receiver;

    const double own_fading = sample_fading(cfg.net.fading, rng);
    const double noise = sample_noise(cfg.net.noise);
    const double B = mac_duration(cfg.mac);
    const SampleRegion region = interferer_region(cfg);

    double i_mean = 0.0;
    double i_max = 0.0;
    std::vector<std::array<double, 3>>* packets = nullptr;
    if (scratch) {
        scratch->packets.clear();
        scratch->episodes.clear();
        packets = &scratch->packets;
    }
    std::vector<std::array<double, 3>> local_packets;
    if (!packets) packets = &local_packets;

    auto add_packet = [&](const Point& src, double start, double fading) {
        const double d = distance(src, receiver, cfg.boundary, side);
        const double level = fading / path_loss_eval(cfg.net.path_loss, d);
        i_mean += level * weight_h(start, B);
        packets->push_back({start, start + B, level});
        if (scratch && scratch->want_episodes)
            scratch->episodes.push_back({src, receiver, start, B, fading});
    };

    if (std::holds_alternative<SlottedMac>(cfg.mac)) {
        const auto& mac = std::get<SlottedMac>(cfg.mac);
        auto nodes = sample_ppp(cfg.net.lambda, region.x0, region.y0, region.x1, region.y1, rng);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (const auto& node : nodes) {
            if (coin(rng) < mac.p) {
                add_packet(node, 0.0, sample_fading(cfg.net.fading, rng));
            }
        }
    } else if (std::holds_alternative<RenewalMac>(cfg.mac)) {
        const auto& mac = std::get<RenewalMac>(cfg.mac);
        auto nodes = sample_ppp(cfg.net.lambda, region.x0, region.y0, region.x1, region.y1, rng);
        for (const auto& node : nodes) {
            const RenewalEpochs ep = sample_renewal_interferer_epochs(mac.epsilon, mac.B, rng);
            // Only the last packet before 0 and the first after can touch [0, B].
            if (ep.r_epoch > -mac.B)
                add_packet(node, ep.r_epoch, sample_fading(cfg.net.fading, rng));
            if (ep.s_epoch < mac.B)
                add_packet(node, ep.s_epoch, sample_fading(cfg.net.fading, rng));
        }
    } else {
        const auto& mac = std::get<RainMac>(cfg.mac);
        // Space-time arrivals on region x [-B, B); births outside cannot
        // overlap the typical packet.
        const double st_intensity = mac.lambda_s * 2.0 * mac.B;
        auto nodes = sample_ppp(st_intensity, region.x0, region.y0, region.x1, region.y1, rng);
        std::uniform_real_distribution<double> birth(-mac.B, mac.B);
        for (const auto& node : nodes) {
            add_packet(node, birth(rng), sample_fading(cfg.net.fading, rng));
        }
    }

    // Exterior interference the finite window cannot carry is constant in
    // time, so it shifts the mean and the max equally.
    i_mean += far_compensation;
    double peak = 0.0;
    if (!packets->empty()) {
        peak = InterferenceTimeline::from_packets(*packets, B).max_level();
    }
    i_max = far_compensation + peak;

    RepOutcome out;
    out.i_mean = i_mean;
    out.i_max = i_max;
    out.fading = own_fading;
    out.noise = noise;
    const double threshold = cfg.net.T * path_loss_eval(cfg.net.path_loss, cfg.net.r);
    out.success_mean = own_fading >= threshold * (noise + i_mean);
    out.success_max = own_fading >= threshold * (noise + i_max);
    return out;
}

struct BlockCounters {
    long long mean_successes = 0;
    long long max_successes = 0;
    long long dominance_violations = 0;
};

// Replications are split into fixed-size blocks indexed independently of the
// thread count; workers grab blocks atomically and write into their own slot,
// so the aggregate is identical however the work is scheduled.
std::vector<BlockCounters> run_blocks(const SimConfig& cfg, double far_compensation) {
    const long long n = cfg.replications;
    const long long block_size = 4096;
    const long long n_blocks = (n + block_size - 1) / block_size;
    std::vector<BlockCounters> blocks(static_cast<std::size_t>(n_blocks));

    unsigned hw = std::thread::hardware_concurrency();
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, hw);
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks));

    std::atomic<long long> next_block{0};
    auto worker = [&]() {
        for (;;) {
            const long long b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            BlockCounters counters;
            const long long lo = b * block_size;
            const long long hi = std::min(n, lo + block_size);
            for (long long rep = lo; rep < hi; ++rep) {
                const RepOutcome out = run_replication(cfg, rep, nullptr, nullptr, far_compensation);
                counters.mean_successes += out.success_mean;
                counters.max_successes += out.success_max;
                counters.dominance_violations += (out.success_max && !out.success_mean);
            }
            blocks[static_cast<std::size_t>(b)] = counters;
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return blocks;
}

double torus_compensation(const SimConfig& cfg) {
    return cfg.boundary == Boundary::Torus ? far_field_mean_interference(cfg) : 0.0;
}

PairedEstimate aggregate(const SimConfig& cfg) {
    cfg.validate();
    const auto blocks = run_blocks(cfg, torus_compensation(cfg));
    BlockCounters total;
    for (const auto& b : blocks) {
        total.mean_successes += b.mean_successes;
        total.max_successes += b.max_successes;
        total.dominance_violations += b.dominance_violations;
    }
    PairedEstimate out;
    out.mean_constraint = bernoulli_estimate(total.mean_successes, cfg.replications);
    out.max_constraint = bernoulli_estimate(total.max_successes, cfg.replications);
    out.dominance_violations = total.dominance_violations;
    return out;
}

}  // namespace

RepOutcome simulate_one(const SimConfig& cfg, long long rep_index) {
    cfg.validate();
    return run_replication(cfg, rep_index, nullptr, nullptr, torus_compensation(cfg));
}

RepDetail simulate_one_detailed(const SimConfig& cfg, long long rep_index) {
    cfg.validate();
    RepDetail detail;
    RepScratch scratch;
    scratch.want_episodes = true;
    detail.outcome =
        run_replication(cfg, rep_index, &scratch, &detail.receiver, torus_compensation(cfg));
    detail.timeline = InterferenceTimeline::from_packets(scratch.packets, mac_duration(cfg.mac));
    double h_sum = 0.0;
    const double B = mac_duration(cfg.mac);
    for (const auto& pk : scratch.packets) h_sum += pk[2] * weight_h(pk[0], B);
    detail.i_mean_from_weights = h_sum;
    detail.episodes = std::move(scratch.episodes);
    return detail;
}

Estimate simulate(const SimConfig& cfg) {
    const PairedEstimate paired = aggregate(cfg);
    return cfg.constraint == SinrConstraint::MeanInterference ? paired.mean_constraint
                                                              : paired.max_constraint;
}

Estimate simulate_slotted(const SimConfig& cfg) {
    require(std::holds_alternative<SlottedMac>(cfg.mac), "simulate_slotted: slotted MAC required");
    return simulate(cfg);
}

Estimate simulate_renewal(const SimConfig& cfg) {
    require(std::holds_alternative<RenewalMac>(cfg.mac), "simulate_renewal: renewal MAC required");
    return simulate(cfg);
}

Estimate simulate_rain(const SimConfig& cfg) {
    require(std::holds_alternative<RainMac>(cfg.mac), "simulate_rain: rain MAC required");
    return simulate(cfg);
}

PairedEstimate simulate_paired(const SimConfig& cfg) { return aggregate(cfg); }

DensitySweepResult estimate_density_of_success(const SimConfig& cfg,
                                               const std::vector<double>& taus) {
    require(!taus.empty(), "estimate_density_of_success: empty grid");
    DensitySweepResult result;
    result.rows.reserve(taus.size());
    for (double tau : taus) {
        require(tau > 0.0 && tau < 1.0, "estimate_density_of_success: tau must lie in (0, 1)");
        SimConfig point = cfg;
        double control = tau;
        if (std::holds_alternative<SlottedMac>(cfg.mac)) {
            auto mac = std::get<SlottedMac>(cfg.mac);
            mac.p = tau;
            control = tau;
            point.mac = mac;
        } else if (std::holds_alternative<RenewalMac>(cfg.mac)) {
            auto mac = RenewalMac::from_tau(tau, std::get<RenewalMac>(cfg.mac).B);
            control = mac.epsilon_b();
            point.mac = mac;
        } else {
            auto mac = std::get<RainMac>(cfg.mac);
            mac.lambda_s = equivalent_rain_density(cfg.net.lambda, tau, mac.B);
            control = mac.lambda_s * mac.B;
            point.mac = mac;
        }
        const PairedEstimate paired = simulate_paired(point);
        DensitySweepRow row;
        row.tau = tau;
        row.control = control;
        row.est_mean = paired.mean_constraint;
        row.est_max = paired.max_constraint;
        const double density = cfg.net.lambda * tau;
        row.dsuc_mean = density * paired.mean_constraint.mean;
        row.dsuc_max = density * paired.max_constraint.mean;
        result.rows.push_back(row);
    }
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].dsuc_mean > result.rows[result.argmax_mean].dsuc_mean)
            result.argmax_mean = i;
        if (result.rows[i].dsuc_max > result.rows[result.argmax_max].dsuc_max)
            result.argmax_max = i;
    }
    return result;
}

}  // namespace nsaloha
