#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "piclb/geometry.hpp"

namespace piclb {

struct Particle {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double q = -1.0;
    double m = 1.0;
    std::uint64_t id = 0;
};

/// Counter-streaming beam pair: half the particles at +v0, half at -v0,
/// positions uniform with a seeded sinusoidal displacement along x.
struct TwoStreamConfig {
    long long n_particles = 0;  // must be even
    double v0 = 0.0;
    double charge = -1.0;
    double mass = 1.0;
    double eps = 0.0;   // displacement amplitude
    int k_mode = 1;     // displaced mode number
    std::uint64_t seed = 0;
};

/// Periodic node-centered scalar field, row-major (j*nx + i).
class NodeField {
public:
    NodeField() = default;
    NodeField(int nx, int ny) : nx_(nx), ny_(ny), v_(static_cast<std::size_t>(nx) * ny, 0.0) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double& at(int i, int j) { return v_[static_cast<std::size_t>(j) * nx_ + i]; }
    double at(int i, int j) const { return v_[static_cast<std::size_t>(j) * nx_ + i]; }
    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    double sum() const;
    void subtract_mean();

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> v_;
};

using ChargeGrid = NodeField;
using PotentialGrid = NodeField;

struct EFieldGrid {
    NodeField ex;
    NodeField ey;
};

struct FieldSolveResult {
    PotentialGrid phi;
    EFieldGrid e;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

/// Cloud-in-cell stencil: the four nodes surrounding a position and their
/// bilinear weights. Weights are non-negative and sum to 1.
struct CicStencil {
    int i0, j0, i1, j1;
    double w00, w10, w01, w11;
};

CicStencil cic_stencil(double x, double y, const FieldGrid& fg, const Domain& dom);

std::vector<Particle> init_two_stream(const TwoStreamConfig& cfg, const Domain& dom);

/// Phase A, unnormalized: per-node sums of q times the CIC weights. The sum
/// over nodes equals the total particle charge.
ChargeGrid deposit_charge_raw(std::span<const Particle> particles, const FieldGrid& fg,
                              const Domain& dom);

/// Phase A: raw deposition divided by the cell area, then mean-subtracted
/// (neutralizing background for the periodic solve).
ChargeGrid deposit_charge(std::span<const Particle> particles, const FieldGrid& fg,
                          const Domain& dom);

/// Phase B: periodic 5-point Jacobi solve of lap(phi) = -rho, gauge-fixed to
/// zero mean; E = -grad(phi) by central differences. If the residual does not
/// reach tol within max_iter sweeps the result is flagged (converged=false)
/// and carries the last residual; callers may keep running with it.
FieldSolveResult solve_fields(const ChargeGrid& rho, const FieldGrid& fg, const Domain& dom,
                              double tol, int max_iter);

/// Phase C: bilinear interpolation of (ex,ey) at the particle position, with
/// the same weights deposition uses.
Vec2 gather_field(const Particle& p, const EFieldGrid& ef, const FieldGrid& fg,
                  const Domain& dom);

/// Phase D, leapfrog: v += (q/m) E dt; x += v dt; positions wrapped.
/// efield_at_particles is aligned with the particle vector.
void push_particles(std::vector<Particle>& particles, std::span<const Vec2> efield_at_particles,
                    double dt, const Domain& dom);

/// Shift velocities back half a step so the leapfrog staggering starts at
/// t = -dt/2.
void apply_half_kick_back(std::vector<Particle>& particles, const EFieldGrid& ef,
                          const FieldGrid& fg, const Domain& dom, double dt);

/// Total electrostatic field energy: sum(ex^2 + ey^2) * hx*hy / 2.
double field_energy(const EFieldGrid& ef, const FieldGrid& fg, const Domain& dom);

struct PicState {
    Domain dom;
    FieldGrid fg;
    double dt = 0.0;
    double solver_tol = 1e-6;
    int solver_max_iter = 0;
    std::vector<Particle> particles;
};

struct PicStepInfo {
    double field_energy = 0.0;
    int solver_iterations = 0;
    double solver_residual = 0.0;
    bool solver_converged = true;
};

/// One full A -> B -> C -> D step; returns the field-energy diagnostic and
/// the solver flag.
PicStepInfo pic_step(PicState& state);

/// Deterministic uniform double in [0,1) from the top 53 bits of a 64-bit
/// draw; identical across platforms for a given engine state.
template <class Rng>
double canonical_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace piclb
