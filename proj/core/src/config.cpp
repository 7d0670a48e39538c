#include "piclb/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace piclb {

namespace {

// Plasma frequency the default charge is tuned for. High enough that the
// counter-streaming beams bunch well inside a 500-step desk run, low enough
// that the fastest-growing wavelength spans several grid elements.
constexpr double kDefaultPlasmaFrequency = 2.0 * 6.283185307179586;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: key '" + key + "': " + what);
}

double parse_double(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t.empty()) bad_value(key, "empty value");
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) bad_value(key, "expected a number, got '" + t + "'");
    if (!std::isfinite(x)) bad_value(key, "value must be finite");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    long long x = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size())
        bad_value(key, "expected an integer, got '" + t + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size())
        bad_value(key, "expected a non-negative integer, got '" + t + "'");
    return x;
}

int parse_bounded_int(const std::string& key, const std::string& v) {
    const long long x = parse_int(key, v);
    if (x < -2000000000LL || x > 2000000000LL) bad_value(key, "value out of range");
    return static_cast<int>(x);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::StaticUniform: return "uniform";
        case Strategy::StaticUrb: return "static_urb";
        case Strategy::Rcb: return "rcb";
        case Strategy::Urb: return "urb";
        case Strategy::UrbLimited: return "urb_limited";
        case Strategy::OrbH: return "orbh";
    }
    return "?";
}

const char* policy_name(OwnershipPolicy p) {
    return p == OwnershipPolicy::Eulerian ? "eulerian" : "lagrangian";
}

Strategy parse_strategy(const std::string& token) {
    if (token == "uniform") return Strategy::StaticUniform;
    if (token == "static_urb") return Strategy::StaticUrb;
    if (token == "rcb") return Strategy::Rcb;
    if (token == "urb") return Strategy::Urb;
    if (token == "urb_limited") return Strategy::UrbLimited;
    if (token == "orbh") return Strategy::OrbH;
    throw std::invalid_argument(
        "config: key 'strategy': unknown strategy '" + token +
        "' (expected uniform, static_urb, rcb, urb, urb_limited or orbh)");
}

OwnershipPolicy parse_policy(const std::string& token) {
    if (token == "eulerian") return OwnershipPolicy::Eulerian;
    if (token == "lagrangian") return OwnershipPolicy::Lagrangian;
    throw std::invalid_argument("config: key 'policy': unknown policy '" + token +
                                "' (expected eulerian or lagrangian)");
}

bool strategy_is_static(Strategy s) {
    return s == Strategy::StaticUniform || s == Strategy::StaticUrb;
}

RawConfig parse_raw_config(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: line " + std::to_string(lineno) + ": empty key");

        if (key == "lx") raw.lx = parse_double(key, value);
        else if (key == "ly") raw.ly = parse_double(key, value);
        else if (key == "nx") raw.nx = parse_bounded_int(key, value);
        else if (key == "ny") raw.ny = parse_bounded_int(key, value);
        else if (key == "gx") raw.gx = parse_bounded_int(key, value);
        else if (key == "gy") raw.gy = parse_bounded_int(key, value);
        else if (key == "ranks") raw.ranks = parse_bounded_int(key, value);
        else if (key == "strategy") raw.strategy = parse_strategy(value);
        else if (key == "policy") raw.policy = parse_policy(value);
        else if (key == "particles") raw.particles = parse_int(key, value);
        else if (key == "v0") raw.v0 = parse_double(key, value);
        else if (key == "eps") raw.eps = parse_double(key, value);
        else if (key == "k_mode") raw.k_mode = parse_bounded_int(key, value);
        else if (key == "charge") raw.charge = parse_double(key, value);
        else if (key == "mass") raw.mass = parse_double(key, value);
        else if (key == "dt") raw.dt = parse_double(key, value);
        else if (key == "steps") raw.steps = parse_bounded_int(key, value);
        else if (key == "seed") raw.seed = parse_u64(key, value);
        else if (key == "rebalance_period") raw.rebalance_period = parse_bounded_int(key, value);
        else if (key == "rebalance_threshold") raw.rebalance_threshold = parse_double(key, value);
        else if (key == "beta") raw.beta = parse_double(key, value);
        else if (key == "alpha") raw.alpha = parse_double(key, value);
        else if (key == "orbh_column_period") raw.orbh_column_period = parse_bounded_int(key, value);
        else if (key == "adjust_depth_min") raw.adjust_depth_min = parse_bounded_int(key, value);
        else if (key == "solver_tol") raw.solver_tol = parse_double(key, value);
        else if (key == "solver_max_iter") raw.solver_max_iter = parse_bounded_int(key, value);
        else if (key == "out_dir") raw.out_dir = value;
        else if (key == "snapshot_period") raw.snapshot_period = parse_bounded_int(key, value);
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return raw;
}

RunConfig resolve_config(const RawConfig& raw) {
    RunConfig cfg;
    cfg.lx = raw.lx.value_or(cfg.lx);
    cfg.ly = raw.ly.value_or(cfg.ly);
    cfg.nx = raw.nx.value_or(cfg.nx);
    cfg.ny = raw.ny.value_or(cfg.ny);
    cfg.gx = raw.gx.value_or(cfg.gx);
    cfg.gy = raw.gy.value_or(cfg.gy);
    cfg.ranks = raw.ranks.value_or(cfg.ranks);
    cfg.strategy = raw.strategy.value_or(cfg.strategy);
    cfg.policy = raw.policy.value_or(cfg.policy);
    cfg.particles = raw.particles.value_or(cfg.particles);
    cfg.v0 = raw.v0.value_or(cfg.v0);
    cfg.eps = raw.eps.value_or(cfg.eps);
    cfg.k_mode = raw.k_mode.value_or(cfg.k_mode);
    cfg.mass = raw.mass.value_or(cfg.mass);
    cfg.steps = raw.steps.value_or(cfg.steps);
    cfg.seed = raw.seed.value_or(cfg.seed);
    cfg.rebalance_period = raw.rebalance_period.value_or(cfg.rebalance_period);
    cfg.rebalance_threshold = raw.rebalance_threshold.value_or(cfg.rebalance_threshold);
    cfg.beta = raw.beta.value_or(cfg.beta);
    cfg.alpha = raw.alpha.value_or(cfg.alpha);
    cfg.orbh_column_period = raw.orbh_column_period.value_or(cfg.orbh_column_period);
    cfg.adjust_depth_min = raw.adjust_depth_min.value_or(cfg.adjust_depth_min);
    cfg.solver_tol = raw.solver_tol.value_or(cfg.solver_tol);
    cfg.out_dir = raw.out_dir.value_or(cfg.out_dir);
    cfg.snapshot_period = raw.snapshot_period.value_or(cfg.snapshot_period);

    if (cfg.lx <= 0.0) bad_value("lx", "domain extent must be > 0");
    if (cfg.ly <= 0.0) bad_value("ly", "domain extent must be > 0");
    if (cfg.gx < 1) bad_value("gx", "element count must be >= 1");
    if (cfg.gy < 1) bad_value("gy", "element count must be >= 1");
    if (cfg.nx < 2) bad_value("nx", "field grid must have at least 2 nodes per axis");
    if (cfg.ny < 2) bad_value("ny", "field grid must have at least 2 nodes per axis");
    if (cfg.nx % cfg.gx != 0)
        bad_value("nx", "must be divisible by gx so each element holds whole cells");
    if (cfg.ny % cfg.gy != 0)
        bad_value("ny", "must be divisible by gy so each element holds whole cells");
    if (cfg.ranks < 1) bad_value("ranks", "must be >= 1");
    if (static_cast<long long>(cfg.ranks) > static_cast<long long>(cfg.gx) * cfg.gy)
        bad_value("ranks", "cannot exceed the number of grid elements");
    if (cfg.strategy == Strategy::Rcb && !is_power_of_two(cfg.ranks))
        bad_value("ranks", "rcb requires a power-of-two rank count; use urb instead");
    if (cfg.particles <= 0 || cfg.particles % 2 != 0)
        bad_value("particles", "must be positive and even (two equal beams)");
    if (cfg.eps < 0.0) bad_value("eps", "perturbation amplitude must be >= 0");
    if (cfg.k_mode < 0) bad_value("k_mode", "mode number must be >= 0");
    if (cfg.mass <= 0.0) bad_value("mass", "must be > 0");
    if (cfg.steps < 0) bad_value("steps", "must be >= 0");
    if (cfg.rebalance_period < 1) bad_value("rebalance_period", "must be >= 1");
    if (cfg.rebalance_threshold < 1.0) bad_value("rebalance_threshold", "must be >= 1");
    if (cfg.beta < 0.0) bad_value("beta", "cost weight must be >= 0");
    if (cfg.alpha < 0.0 || cfg.alpha > 1.0) bad_value("alpha", "must lie in [0, 1]");
    if (cfg.orbh_column_period < 1) bad_value("orbh_column_period", "must be >= 1");
    if (cfg.adjust_depth_min < 0) bad_value("adjust_depth_min", "must be >= 0");
    if (cfg.solver_tol <= 0.0) bad_value("solver_tol", "must be > 0");
    if (cfg.snapshot_period < 0) bad_value("snapshot_period", "must be >= 0");

    // Derived defaults. The charge follows the plasma-frequency rule
    // wp^2 = (N / (lx*ly)) q^2 / m; dt keeps v0*dt <= 0.1*hx.
    if (raw.charge) {
        cfg.charge = *raw.charge;
    } else {
        cfg.charge = -kDefaultPlasmaFrequency *
                     std::sqrt(cfg.mass * cfg.lx * cfg.ly / static_cast<double>(cfg.particles));
    }
    if (cfg.charge == 0.0) bad_value("charge", "must be nonzero");

    const double hx = cfg.lx / cfg.nx;
    const double hy = cfg.ly / cfg.ny;
    if (raw.dt) {
        cfg.dt = *raw.dt;
    } else {
        cfg.dt = cfg.v0 > 0.0 ? 0.1 * hx / cfg.v0 : 0.1 * std::min(hx, hy);
    }
    if (cfg.dt <= 0.0) bad_value("dt", "must be > 0");

    if (raw.solver_max_iter) {
        cfg.solver_max_iter = *raw.solver_max_iter;
    } else {
        cfg.solver_max_iter = 20 * std::max(cfg.nx, cfg.ny);
    }
    if (cfg.solver_max_iter < 1) bad_value("solver_max_iter", "must be >= 1");

    return cfg;
}

RunConfig parse_config(const std::string& text) {
    return resolve_config(parse_raw_config(text));
}

std::string emit_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "lx = " << fmt_double(cfg.lx) << '\n';
    os << "ly = " << fmt_double(cfg.ly) << '\n';
    os << "nx = " << cfg.nx << '\n';
    os << "ny = " << cfg.ny << '\n';
    os << "gx = " << cfg.gx << '\n';
    os << "gy = " << cfg.gy << '\n';
    os << "ranks = " << cfg.ranks << '\n';
    os << "strategy = " << strategy_name(cfg.strategy) << '\n';
    os << "policy = " << policy_name(cfg.policy) << '\n';
    os << "particles = " << cfg.particles << '\n';
    os << "v0 = " << fmt_double(cfg.v0) << '\n';
    os << "eps = " << fmt_double(cfg.eps) << '\n';
    os << "k_mode = " << cfg.k_mode << '\n';
    os << "charge = " << fmt_double(cfg.charge) << '\n';
    os << "mass = " << fmt_double(cfg.mass) << '\n';
    os << "dt = " << fmt_double(cfg.dt) << '\n';
    os << "steps = " << cfg.steps << '\n';
    os << "seed = " << cfg.seed << '\n';
    os << "rebalance_period = " << cfg.rebalance_period << '\n';
    os << "rebalance_threshold = " << fmt_double(cfg.rebalance_threshold) << '\n';
    os << "beta = " << fmt_double(cfg.beta) << '\n';
    os << "alpha = " << fmt_double(cfg.alpha) << '\n';
    os << "orbh_column_period = " << cfg.orbh_column_period << '\n';
    os << "adjust_depth_min = " << cfg.adjust_depth_min << '\n';
    os << "solver_tol = " << fmt_double(cfg.solver_tol) << '\n';
    os << "solver_max_iter = " << cfg.solver_max_iter << '\n';
    os << "out_dir = " << cfg.out_dir << '\n';
    os << "snapshot_period = " << cfg.snapshot_period << '\n';
    return os.str();
}

}  // namespace piclb
