#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace piclb {

enum class Strategy {
    StaticUniform,  // fixed equal-element blocks, cost function ignored
    StaticUrb,      // cost-based tree built once at startup
    Rcb,            // dynamic recursive bisection (power-of-two ranks)
    Urb,            // dynamic unbalanced recursive bisection
    UrbLimited,     // dynamic URB with frozen shallow cuts
    OrbH,           // strip layout with pairwise diffusion exchange
};

enum class OwnershipPolicy {
    Eulerian,    // ranks own space; particles migrate across frontiers
    Lagrangian,  // ranks own a fixed particle set for the whole run
};

const char* strategy_name(Strategy s);
const char* policy_name(OwnershipPolicy p);
Strategy parse_strategy(const std::string& token);
OwnershipPolicy parse_policy(const std::string& token);
bool strategy_is_static(Strategy s);

/// Fully resolved run parameters. All module preconditions hold after
/// resolve() / parse_config() succeed.
struct RunConfig {
    double lx = 1.0;
    double ly = 1.0;
    int nx = 64;
    int ny = 64;
    int gx = 16;
    int gy = 16;
    int ranks = 8;
    Strategy strategy = Strategy::Urb;
    OwnershipPolicy policy = OwnershipPolicy::Eulerian;
    long long particles = 100000;
    double v0 = 0.2;
    double eps = 0.01;
    int k_mode = 2;
    double charge = 0.0;  // resolved from the plasma-frequency rule when omitted
    double mass = 1.0;
    double dt = 0.0;      // resolved from the CFL-style rule when omitted
    int steps = 500;
    std::uint64_t seed = 1;
    int rebalance_period = 10;
    double rebalance_threshold = 1.2;
    double beta = 0.0;
    double alpha = 0.5;
    int orbh_column_period = 4;
    int adjust_depth_min = 1;
    double solver_tol = 1e-6;
    int solver_max_iter = 0;  // resolved to 20*max(nx,ny) when omitted
    std::string out_dir = "out";
    int snapshot_period = 100;

    bool operator==(const RunConfig&) const = default;
};

/// Parsed key = value lines before defaults are applied; used by the CLI to
/// layer flag overrides on top of the file before resolving.
struct RawConfig {
    std::optional<double> lx, ly;
    std::optional<int> nx, ny, gx, gy, ranks;
    std::optional<Strategy> strategy;
    std::optional<OwnershipPolicy> policy;
    std::optional<long long> particles;
    std::optional<double> v0, eps;
    std::optional<int> k_mode;
    std::optional<double> charge, mass, dt;
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    std::optional<int> rebalance_period;
    std::optional<double> rebalance_threshold, beta, alpha;
    std::optional<int> orbh_column_period, adjust_depth_min;
    std::optional<double> solver_tol;
    std::optional<int> solver_max_iter;
    std::optional<std::string> out_dir;
    std::optional<int> snapshot_period;
};

/// Parse flat `key = value` text ('#' starts a comment). Unknown keys are
/// rejected with a message naming the key.
RawConfig parse_raw_config(const std::string& text);

/// Apply defaults and derived values, then validate every invariant.
/// Throws std::invalid_argument naming the offending key and constraint.
RunConfig resolve_config(const RawConfig& raw);

/// parse_raw_config + resolve_config.
RunConfig parse_config(const std::string& text);

/// Full effective configuration as re-parseable `key = value` lines;
/// parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

}  // namespace piclb
