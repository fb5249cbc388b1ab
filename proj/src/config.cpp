#include "nsaloha/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nsaloha/csv.hpp"

namespace nsaloha {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ConfigError("config: key '" + key + "' needs a finite number, got '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config: key '" + key + "' needs an integer, got '" + value + "'");
    return v;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(line_no) + " has an empty key or value");
        map[key] = value;
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string serialize_config(const ConfigMap& map) {
    std::ostringstream out;
    for (const auto& [key, value] : map) out << key << " = " << value << "\n";
    return out.str();
}

SimConfig default_scenario() {
    SimConfig cfg;
    cfg.net.lambda = 1e-3;
    cfg.net.r = std::sqrt(1000.0);
    cfg.net.T = 10.0;
    cfg.net.path_loss = PathLossModel::power_law(1.0, 4.0);
    cfg.net.fading = FadingModel::rayleigh(1.0);
    cfg.net.noise = NoiseModel::zero();
    cfg.mac = SlottedMac{0.05, 1.0};
    cfg.window_side = 1000.0;
    cfg.boundary = Boundary::Torus;
    cfg.replications = 10000;
    cfg.rng_seed = 1;
    cfg.constraint = SinrConstraint::MeanInterference;
    return cfg;
}

SimConfig scenario_from_config(const ConfigMap& map, SimConfig base) {
    // Collected first so every key is checked before anything heavy runs.
    double A = base.net.path_loss.amplitude;
    double beta = base.net.path_loss.beta;
    double u0 = base.net.path_loss.u0;
    std::string pathloss_kind = "powerlaw";
    switch (base.net.path_loss.kind) {
        case PathLossModel::Kind::PowerLaw: pathloss_kind = "powerlaw"; break;
        case PathLossModel::Kind::ClampedMax: pathloss_kind = "clamped"; break;
        case PathLossModel::Kind::Shifted: pathloss_kind = "shifted"; break;
        case PathLossModel::Kind::MinDistance: pathloss_kind = "mindist"; break;
    }
    double mu = base.net.fading.mu;
    double noise_w = base.net.noise.kind == NoiseModel::Kind::DeterministicPower ? base.net.noise.w : 0.0;
    double B = mac_duration(base.mac);
    std::string mac_kind = std::holds_alternative<SlottedMac>(base.mac)   ? "slotted"
                           : std::holds_alternative<RenewalMac>(base.mac) ? "renewal"
                                                                          : "rain";
    double p = std::holds_alternative<SlottedMac>(base.mac) ? std::get<SlottedMac>(base.mac).p : 0.05;
    double epsilon_b = std::holds_alternative<RenewalMac>(base.mac)
                           ? std::get<RenewalMac>(base.mac).epsilon_b()
                           : p / (1.0 - p);
    double lambda_s = std::holds_alternative<RainMac>(base.mac)
                          ? std::get<RainMac>(base.mac).lambda_s
                          : base.net.lambda * p / B;
    bool mac_param_seen = false;

    SimConfig cfg = base;
    for (const auto& [key, value] : map) {
        if (key == "lambda") cfg.net.lambda = parse_double(key, value);
        else if (key == "r") cfg.net.r = parse_double(key, value);
        else if (key == "T") cfg.net.T = parse_double(key, value);
        else if (key == "beta") beta = parse_double(key, value);
        else if (key == "A") A = parse_double(key, value);
        else if (key == "mu") mu = parse_double(key, value);
        else if (key == "noise_w") noise_w = parse_double(key, value);
        else if (key == "B") B = parse_double(key, value);
        else if (key == "pathloss.kind") pathloss_kind = value;
        else if (key == "pathloss.u0") u0 = parse_double(key, value);
        else if (key == "mac.kind") mac_kind = value;
        else if (key == "mac.p") { p = parse_double(key, value); mac_param_seen = true; }
        else if (key == "mac.epsilonB") { epsilon_b = parse_double(key, value); mac_param_seen = true; }
        else if (key == "mac.lambda_s") { lambda_s = parse_double(key, value); mac_param_seen = true; }
        else if (key == "window") cfg.window_side = parse_double(key, value);
        else if (key == "boundary") {
            if (value == "torus") cfg.boundary = Boundary::Torus;
            else if (value == "none") cfg.boundary = Boundary::None;
            else if (value == "guard") cfg.boundary = Boundary::GuardMargin;
            else throw ConfigError("config: boundary must be torus|none|guard, got '" + value + "'");
        }
        else if (key == "guard_margin") cfg.guard_margin = parse_double(key, value);
        else if (key == "replications") cfg.replications = parse_int(key, value);
        else if (key == "seed") cfg.rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "constraint") {
            if (value == "mean") cfg.constraint = SinrConstraint::MeanInterference;
            else if (value == "max") cfg.constraint = SinrConstraint::MaxInterference;
            else throw ConfigError("config: constraint must be mean|max, got '" + value + "'");
        }
        else if (key == "threads") cfg.threads = static_cast<int>(parse_int(key, value));
        else throw ConfigError("config: unknown key '" + key + "'");
    }

    if (pathloss_kind == "powerlaw") cfg.net.path_loss = PathLossModel::power_law(A, beta);
    else if (pathloss_kind == "clamped") cfg.net.path_loss = PathLossModel::clamped_max(A, beta);
    else if (pathloss_kind == "shifted") cfg.net.path_loss = PathLossModel::shifted(A, beta);
    else if (pathloss_kind == "mindist") cfg.net.path_loss = PathLossModel::min_distance(A, beta, u0);
    else throw ConfigError("config: pathloss.kind must be powerlaw|clamped|shifted|mindist");

    cfg.net.fading = FadingModel::rayleigh(mu);
    cfg.net.noise = noise_w > 0.0 ? NoiseModel::deterministic_power(noise_w) : NoiseModel::zero();

    if (mac_kind == "slotted") cfg.mac = SlottedMac{p, B};
    else if (mac_kind == "renewal") cfg.mac = RenewalMac::from_epsilon_b(epsilon_b, B);
    else if (mac_kind == "rain") cfg.mac = RainMac{lambda_s, B};
    else throw ConfigError("config: mac.kind must be slotted|renewal|rain");
    (void)mac_param_seen;

    cfg.validate();
    return cfg;
}

ConfigMap config_from_scenario(const SimConfig& cfg) {
    ConfigMap map;
    map["lambda"] = format_double(cfg.net.lambda, 17);
    map["r"] = format_double(cfg.net.r, 17);
    map["T"] = format_double(cfg.net.T, 17);
    map["beta"] = format_double(cfg.net.path_loss.beta, 17);
    map["A"] = format_double(cfg.net.path_loss.amplitude, 17);
    map["mu"] = format_double(cfg.net.fading.mu, 17);
    map["noise_w"] =
        format_double(cfg.net.noise.kind == NoiseModel::Kind::DeterministicPower ? cfg.net.noise.w : 0.0, 17);
    map["B"] = format_double(mac_duration(cfg.mac), 17);
    switch (cfg.net.path_loss.kind) {
        case PathLossModel::Kind::PowerLaw: map["pathloss.kind"] = "powerlaw"; break;
        case PathLossModel::Kind::ClampedMax: map["pathloss.kind"] = "clamped"; break;
        case PathLossModel::Kind::Shifted: map["pathloss.kind"] = "shifted"; break;
        case PathLossModel::Kind::MinDistance:
            map["pathloss.kind"] = "mindist";
            map["pathloss.u0"] = format_double(cfg.net.path_loss.u0, 17);
            break;
    }
    if (std::holds_alternative<SlottedMac>(cfg.mac)) {
        map["mac.kind"] = "slotted";
        map["mac.p"] = format_double(std::get<SlottedMac>(cfg.mac).p, 17);
    } else if (std::holds_alternative<RenewalMac>(cfg.mac)) {
        map["mac.kind"] = "renewal";
        map["mac.epsilonB"] = format_double(std::get<RenewalMac>(cfg.mac).epsilon_b(), 17);
    } else {
        map["mac.kind"] = "rain";
        map["mac.lambda_s"] = format_double(std::get<RainMac>(cfg.mac).lambda_s, 17);
    }
    map["window"] = format_double(cfg.window_side, 17);
    map["boundary"] = cfg.boundary == Boundary::Torus  ? "torus"
                      : cfg.boundary == Boundary::None ? "none"
                                                       : "guard";
    if (cfg.boundary == Boundary::GuardMargin)
        map["guard_margin"] = format_double(cfg.guard_margin, 17);
    map["replications"] = std::to_string(cfg.replications);
    map["seed"] = std::to_string(cfg.rng_seed);
    map["constraint"] = cfg.constraint == SinrConstraint::MeanInterference ? "mean" : "max";
    if (cfg.threads > 0) map["threads"] = std::to_string(cfg.threads);
    return map;
}

}  // namespace nsaloha
