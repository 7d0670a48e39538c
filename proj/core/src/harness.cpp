#include "piclb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace piclb {

long long StepMetrics::max_load() const {
    long long mx = 0;
    for (long long v : rank_load) mx = std::max(mx, v);
    return mx;
}

double StepMetrics::mean_load() const {
    if (rank_load.empty()) return 0.0;
    long long sum = 0;
    for (long long v : rank_load) sum += v;
    return static_cast<double>(sum) / static_cast<double>(rank_load.size());
}

Harness::Harness(const RunConfig& cfg)
    : Harness(cfg, init_two_stream(
                       TwoStreamConfig{cfg.particles, cfg.v0, cfg.charge, cfg.mass, cfg.eps,
                                       cfg.k_mode, cfg.seed},
                       Domain{cfg.lx, cfg.ly})) {}

Harness::Harness(const RunConfig& cfg, std::vector<Particle> particles)
    : cfg_(cfg),
      dom_{cfg.lx, cfg.ly},
      geg_{cfg.gx, cfg.gy},
      fg_{cfg.nx, cfg.ny},
      particles_(std::move(particles)) {
    if (cfg_.strategy == Strategy::Rcb && (cfg_.ranks & (cfg_.ranks - 1)) != 0)
        throw std::invalid_argument("harness: rcb requires a power-of-two rank count");
    // Finite elements are modeled as the field cells inside each element.
    fe_counts_.assign(static_cast<std::size_t>(cfg_.gx) * cfg_.gy,
                      static_cast<long long>(cfg_.nx / cfg_.gx) * (cfg_.ny / cfg_.gy));
    init_partition();
    owner_.resize(particles_.size());
    for (std::size_t n = 0; n < particles_.size(); ++n) {
        const auto [i, j] = locate_grid_element({particles_[n].x, particles_[n].y}, geg_, dom_);
        owner_[n] = map_.at(i, j);
    }
    init_fields_and_half_kick();
}

void Harness::init_partition() {
    const CostField cf = current_cost_field();
    switch (cfg_.strategy) {
        case Strategy::StaticUniform:
            map_ = uniform_blocks(cfg_.ranks, geg_);
            break;
        case Strategy::StaticUrb:
        case Strategy::Urb:
            map_ = tree_to_map(urb(cf, cfg_.ranks));
            break;
        case Strategy::UrbLimited:
            tree_ = urb(cf, cfg_.ranks);
            map_ = tree_to_map(*tree_);
            break;
        case Strategy::Rcb:
            map_ = tree_to_map(rcb(cf, cfg_.ranks));
            break;
        case Strategy::OrbH:
            layout_ = orbh_init(cf, default_column_ranks(cfg_.ranks));
            map_ = orbh_to_map(*layout_);
            break;
    }
}

void Harness::init_fields_and_half_kick() {
    if (particles_.empty()) return;
    const ChargeGrid rho = deposit_charge(particles_, fg_, dom_);
    const FieldSolveResult solve =
        solve_fields(rho, fg_, dom_, cfg_.solver_tol, cfg_.solver_max_iter);
    init_solve_converged_ = solve.converged;
    apply_half_kick_back(particles_, solve.e, fg_, dom_, cfg_.dt);
}

std::vector<long long> Harness::element_particle_counts() const {
    std::vector<long long> counts(static_cast<std::size_t>(cfg_.gx) * cfg_.gy, 0);
    for (const Particle& p : particles_) {
        const auto [i, j] = locate_grid_element({p.x, p.y}, geg_, dom_);
        ++counts[static_cast<std::size_t>(j) * cfg_.gx + i];
    }
    return counts;
}

CostField Harness::current_cost_field() const {
    CostField cf(cfg_.gx, cfg_.gy, cfg_.beta);
    cf.assign(element_particle_counts(), fe_counts_);
    return cf;
}

std::vector<double> Harness::region_loads(const PartitionMap& map, const CostField& cf) const {
    std::vector<double> loads(static_cast<std::size_t>(cfg_.ranks), 0.0);
    for (int j = 0; j < cfg_.gy; ++j)
        for (int i = 0; i < cfg_.gx; ++i)
            loads[static_cast<std::size_t>(map.at(i, j))] += cf.cost(i, j);
    return loads;
}

bool Harness::ownership_consistent() const {
    if (cfg_.policy == OwnershipPolicy::Lagrangian) return true;
    for (std::size_t n = 0; n < particles_.size(); ++n) {
        const auto [i, j] = locate_grid_element({particles_[n].x, particles_[n].y}, geg_, dom_);
        if (map_.at(i, j) != owner_[n]) return false;
    }
    return true;
}

void Harness::rebalance(const CostField& cf, StepMetrics& m) {
    const PartitionMap before = map_;
    ++lb_iteration_;
    switch (cfg_.strategy) {
        case Strategy::Urb:
            map_ = tree_to_map(urb(cf, cfg_.ranks));
            break;
        case Strategy::UrbLimited:
            tree_ = urb_limited(*tree_, cf, cfg_.adjust_depth_min);
            map_ = tree_to_map(*tree_);
            break;
        case Strategy::Rcb:
            map_ = tree_to_map(rcb(cf, cfg_.ranks));
            break;
        case Strategy::OrbH: {
            DiffusionParams p;
            p.alpha = cfg_.alpha;
            p.column_period = cfg_.orbh_column_period;
            if (lb_iteration_ % cfg_.orbh_column_period == 0)
                column_exchange(*layout_, cf, lb_iteration_, p);
            diffusion_round(*layout_, cf, lb_iteration_, p);
            map_ = orbh_to_map(*layout_);
            break;
        }
        case Strategy::StaticUniform:
        case Strategy::StaticUrb:
            return;  // static strategies never fire
    }
    m.cost_migrated = migration_cost(before, map_, cf);
    if (cfg_.policy == OwnershipPolicy::Eulerian) {
        // elements and the particles inside them move together
        for (std::size_t n = 0; n < particles_.size(); ++n) {
            const auto [i, j] =
                locate_grid_element({particles_[n].x, particles_[n].y}, geg_, dom_);
            owner_[n] = map_.at(i, j);
        }
    }
}

StepMetrics Harness::step() {
    StepMetrics m;
    m.step = step_ + 1;
    m.rank_load.assign(static_cast<std::size_t>(cfg_.ranks), 0);
    m.touched_elements.assign(static_cast<std::size_t>(cfg_.ranks), 0);
    m.locality.assign(static_cast<std::size_t>(cfg_.ranks), 0.0);

    // Phases A and B
    const ChargeGrid rho = deposit_charge(particles_, fg_, dom_);
    const FieldSolveResult solve =
        solve_fields(rho, fg_, dom_, cfg_.solver_tol, cfg_.solver_max_iter);
    m.solver_iters = solve.iterations;
    m.solver_residual = solve.residual;
    m.solver_converged = solve.converged;
    m.field_energy = field_energy(solve.e, fg_, dom_);

    // Phases C and D, with per-rank locality bookkeeping. An element is
    // "touched" when any node of a particle's CIC stencil lies inside it.
    const int cells_x = cfg_.nx / cfg_.gx;
    const int cells_y = cfg_.ny / cfg_.gy;
    touched_.assign(static_cast<std::size_t>(cfg_.ranks),
                    std::vector<char>(static_cast<std::size_t>(cfg_.gx) * cfg_.gy, 0));
    std::vector<Vec2> efield(particles_.size());
    for (std::size_t n = 0; n < particles_.size(); ++n) {
        const Particle& p = particles_[n];
        const int rank = owner_[n];
        ++m.rank_load[static_cast<std::size_t>(rank)];
        efield[n] = gather_field(p, solve.e, fg_, dom_);
        const CicStencil s = cic_stencil(p.x, p.y, fg_, dom_);
        std::vector<char>& bits = touched_[static_cast<std::size_t>(rank)];
        for (const int ni : {s.i0, s.i1})
            for (const int nj : {s.j0, s.j1})
                bits[static_cast<std::size_t>(nj / cells_y) * cfg_.gx + ni / cells_x] = 1;
    }
    push_particles(particles_, efield, cfg_.dt, dom_);

    // Migration phase: Eulerian runs hand crossers to the owner of their new
    // element; Lagrangian runs never move particles between ranks.
    if (cfg_.policy == OwnershipPolicy::Eulerian) {
        for (std::size_t n = 0; n < particles_.size(); ++n) {
            const auto [i, j] =
                locate_grid_element({particles_[n].x, particles_[n].y}, geg_, dom_);
            const int now = map_.at(i, j);
            if (now != owner_[n]) {
                ++m.particles_migrated;
                owner_[n] = now;
            }
        }
    }

    // Locality ratios against the map the step ran under.
    std::vector<int> owned(static_cast<std::size_t>(cfg_.ranks), 0);
    for (int v : map_.owner) ++owned[static_cast<std::size_t>(v)];
    for (int r = 0; r < cfg_.ranks; ++r) {
        int count = 0;
        for (char c : touched_[static_cast<std::size_t>(r)]) count += c;
        m.touched_elements[static_cast<std::size_t>(r)] = count;
        const double denom = cfg_.policy == OwnershipPolicy::Eulerian
                                 ? static_cast<double>(owned[static_cast<std::size_t>(r)])
                                 : static_cast<double>(geg_.element_count());
        m.locality[static_cast<std::size_t>(r)] = denom > 0.0 ? count / denom : 0.0;
    }
    m.locality_max = *std::max_element(m.locality.begin(), m.locality.end());

    std::vector<double> loads(m.rank_load.begin(), m.rank_load.end());
    m.imbalance = imbalance(loads);

    ++step_;

    // Rebalance trigger: every K steps, or when the region-cost imbalance of
    // the current map exceeds the threshold.
    if (!strategy_is_static(cfg_.strategy)) {
        const CostField cf = current_cost_field();
        const bool periodic = step_ % cfg_.rebalance_period == 0;
        const bool degraded =
            imbalance(region_loads(map_, cf)) > cfg_.rebalance_threshold;
        if (periodic || degraded) rebalance(cf, m);
    }
    m.perimeter = boundary_perimeter(map_);
    return m;
}

std::vector<StepMetrics> run(const RunConfig& cfg) {
    Harness h(cfg);
    std::vector<StepMetrics> series;
    series.reserve(static_cast<std::size_t>(cfg.steps));
    for (int t = 0; t < cfg.steps; ++t) series.push_back(h.step());
    return series;
}

}  // namespace piclb
