#include "piclb/pic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace piclb {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double NodeField::sum() const {
    double s = 0.0;
    for (double v : v_) s += v;
    return s;
}

void NodeField::subtract_mean() {
    if (v_.empty()) return;
    const double mean = sum() / static_cast<double>(v_.size());
    for (double& v : v_) v -= mean;
}

CicStencil cic_stencil(double x, double y, const FieldGrid& fg, const Domain& dom) {
    const double tx = wrap_coord(x, dom.lx) * fg.nx / dom.lx;
    const double ty = wrap_coord(y, dom.ly) * fg.ny / dom.ly;
    int i0 = static_cast<int>(tx);
    int j0 = static_cast<int>(ty);
    if (i0 >= fg.nx) i0 = fg.nx - 1;
    if (j0 >= fg.ny) j0 = fg.ny - 1;
    const double fx = tx - i0;
    const double fy = ty - j0;
    CicStencil s;
    s.i0 = i0;
    s.j0 = j0;
    s.i1 = (i0 + 1 == fg.nx) ? 0 : i0 + 1;
    s.j1 = (j0 + 1 == fg.ny) ? 0 : j0 + 1;
    s.w00 = (1.0 - fx) * (1.0 - fy);
    s.w10 = fx * (1.0 - fy);
    s.w01 = (1.0 - fx) * fy;
    s.w11 = fx * fy;
    return s;
}

std::vector<Particle> init_two_stream(const TwoStreamConfig& cfg, const Domain& dom) {
    if (cfg.n_particles <= 0 || cfg.n_particles % 2 != 0)
        throw std::invalid_argument("init_two_stream: n_particles must be positive and even");
    if (cfg.eps < 0.0) throw std::invalid_argument("init_two_stream: eps must be >= 0");
    if (cfg.mass <= 0.0) throw std::invalid_argument("init_two_stream: mass must be > 0");

    std::mt19937_64 rng(cfg.seed);
    std::vector<Particle> particles(static_cast<std::size_t>(cfg.n_particles));
    for (long long n = 0; n < cfg.n_particles; ++n) {
        Particle& p = particles[static_cast<std::size_t>(n)];
        double x = canonical_double(rng) * dom.lx;
        const double y = canonical_double(rng) * dom.ly;
        x += cfg.eps * std::sin(kTwoPi * cfg.k_mode * x / dom.lx);
        p.x = wrap_coord(x, dom.lx);
        p.y = wrap_coord(y, dom.ly);
        // pair (2k, 2k+1) carries +v0 / -v0, so total momentum is zero exactly
        p.vx = (n % 2 == 0) ? cfg.v0 : -cfg.v0;
        p.vy = 0.0;
        p.q = cfg.charge;
        p.m = cfg.mass;
        p.id = static_cast<std::uint64_t>(n);
    }
    return particles;
}

ChargeGrid deposit_charge_raw(std::span<const Particle> particles, const FieldGrid& fg,
                              const Domain& dom) {
    ChargeGrid rho(fg.nx, fg.ny);
    for (const Particle& p : particles) {
        const CicStencil s = cic_stencil(p.x, p.y, fg, dom);
        rho.at(s.i0, s.j0) += p.q * s.w00;
        rho.at(s.i1, s.j0) += p.q * s.w10;
        rho.at(s.i0, s.j1) += p.q * s.w01;
        rho.at(s.i1, s.j1) += p.q * s.w11;
    }
    return rho;
}

ChargeGrid deposit_charge(std::span<const Particle> particles, const FieldGrid& fg,
                          const Domain& dom) {
    ChargeGrid rho = deposit_charge_raw(particles, fg, dom);
    const double inv_cell = 1.0 / (fg.hx(dom) * fg.hy(dom));
    for (double& v : rho.data()) v *= inv_cell;
    rho.subtract_mean();
    return rho;
}

FieldSolveResult solve_fields(const ChargeGrid& rho, const FieldGrid& fg, const Domain& dom,
                              double tol, int max_iter) {
    if (rho.nx() != fg.nx || rho.ny() != fg.ny)
        throw std::invalid_argument("solve_fields: charge grid extents mismatch");
    const int nx = fg.nx;
    const int ny = fg.ny;
    const double hx = fg.hx(dom);
    const double hy = fg.hy(dom);
    const double cx = 1.0 / (hx * hx);
    const double cy = 1.0 / (hy * hy);
    const double denom = 2.0 * cx + 2.0 * cy;

    std::vector<int> xm(nx), xp(nx), ym(ny), yp(ny);
    for (int i = 0; i < nx; ++i) {
        xm[i] = (i == 0) ? nx - 1 : i - 1;
        xp[i] = (i == nx - 1) ? 0 : i + 1;
    }
    for (int j = 0; j < ny; ++j) {
        ym[j] = (j == 0) ? ny - 1 : j - 1;
        yp[j] = (j == ny - 1) ? 0 : j + 1;
    }

    PotentialGrid phi(nx, ny);
    PotentialGrid next(nx, ny);
    auto exact_residual = [&](const PotentialGrid& f) {
        double r = 0.0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double lap = cx * (f.at(xm[i], j) + f.at(xp[i], j)) +
                                   cy * (f.at(i, ym[j]) + f.at(i, yp[j])) - denom * f.at(i, j);
                r = std::max(r, std::abs(lap + rho.at(i, j)));
            }
        return r;
    };

    FieldSolveResult out;
    out.residual = exact_residual(phi);
    out.converged = out.residual <= tol;
    while (!out.converged && out.iterations < max_iter) {
        double max_delta = 0.0;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const double v = (cx * (phi.at(xm[i], j) + phi.at(xp[i], j)) +
                                  cy * (phi.at(i, ym[j]) + phi.at(i, yp[j])) + rho.at(i, j)) /
                                 denom;
                max_delta = std::max(max_delta, std::abs(v - phi.at(i, j)));
                next.at(i, j) = v;
            }
        }
        std::swap(phi, next);
        ++out.iterations;
        // denom * max_delta is the residual of the previous iterate; only pay
        // for the exact check once that estimate reaches the tolerance.
        if (denom * max_delta <= tol) {
            out.residual = exact_residual(phi);
            if (out.residual <= tol) {
                out.converged = true;
                break;
            }
        }
    }
    if (!out.converged) {
        out.residual = exact_residual(phi);
        out.converged = out.residual <= tol;
    }

    phi.subtract_mean();
    out.e.ex = NodeField(nx, ny);
    out.e.ey = NodeField(nx, ny);
    const double sx = -1.0 / (2.0 * hx);
    const double sy = -1.0 / (2.0 * hy);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            out.e.ex.at(i, j) = sx * (phi.at(xp[i], j) - phi.at(xm[i], j));
            out.e.ey.at(i, j) = sy * (phi.at(i, yp[j]) - phi.at(i, ym[j]));
        }
    }
    out.phi = std::move(phi);
    return out;
}

Vec2 gather_field(const Particle& p, const EFieldGrid& ef, const FieldGrid& fg,
                  const Domain& dom) {
    const CicStencil s = cic_stencil(p.x, p.y, fg, dom);
    Vec2 e;
    e.x = s.w00 * ef.ex.at(s.i0, s.j0) + s.w10 * ef.ex.at(s.i1, s.j0) +
          s.w01 * ef.ex.at(s.i0, s.j1) + s.w11 * ef.ex.at(s.i1, s.j1);
    e.y = s.w00 * ef.ey.at(s.i0, s.j0) + s.w10 * ef.ey.at(s.i1, s.j0) +
          s.w01 * ef.ey.at(s.i0, s.j1) + s.w11 * ef.ey.at(s.i1, s.j1);
    return e;
}

void push_particles(std::vector<Particle>& particles, std::span<const Vec2> efield_at_particles,
                    double dt, const Domain& dom) {
    if (particles.size() != efield_at_particles.size())
        throw std::invalid_argument("push_particles: field array size mismatch");
    if (dt <= 0.0) throw std::invalid_argument("push_particles: dt must be > 0");
    for (std::size_t n = 0; n < particles.size(); ++n) {
        Particle& p = particles[n];
        const double a = p.q / p.m * dt;
        p.vx += a * efield_at_particles[n].x;
        p.vy += a * efield_at_particles[n].y;
        p.x = wrap_coord(p.x + p.vx * dt, dom.lx);
        p.y = wrap_coord(p.y + p.vy * dt, dom.ly);
    }
}

void apply_half_kick_back(std::vector<Particle>& particles, const EFieldGrid& ef,
                          const FieldGrid& fg, const Domain& dom, double dt) {
    for (Particle& p : particles) {
        const Vec2 e = gather_field(p, ef, fg, dom);
        const double a = 0.5 * p.q / p.m * dt;
        p.vx -= a * e.x;
        p.vy -= a * e.y;
    }
}

double field_energy(const EFieldGrid& ef, const FieldGrid& fg, const Domain& dom) {
    double s = 0.0;
    const std::vector<double>& ex = ef.ex.data();
    const std::vector<double>& ey = ef.ey.data();
    for (std::size_t n = 0; n < ex.size(); ++n) s += ex[n] * ex[n] + ey[n] * ey[n];
    return 0.5 * s * fg.hx(dom) * fg.hy(dom);
}

PicStepInfo pic_step(PicState& state) {
    PicStepInfo info;
    const ChargeGrid rho = deposit_charge(state.particles, state.fg, state.dom);
    FieldSolveResult solve =
        solve_fields(rho, state.fg, state.dom, state.solver_tol, state.solver_max_iter);
    info.solver_iterations = solve.iterations;
    info.solver_residual = solve.residual;
    info.solver_converged = solve.converged;
    info.field_energy = field_energy(solve.e, state.fg, state.dom);

    std::vector<Vec2> e(state.particles.size());
    for (std::size_t n = 0; n < state.particles.size(); ++n)
        e[n] = gather_field(state.particles[n], solve.e, state.fg, state.dom);
    push_particles(state.particles, e, state.dt, state.dom);
    return info;
}

}  // namespace piclb
