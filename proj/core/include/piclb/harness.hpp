#pragma once

#include <optional>
#include <vector>

#include "piclb/config.hpp"
#include "piclb/cost_field.hpp"
#include "piclb/geometry.hpp"
#include "piclb/orbh.hpp"
#include "piclb/partition.hpp"
#include "piclb/pic.hpp"

namespace piclb {

/// Everything the comparison plots need from one superstep. Loads are the
/// particle counts each rank pushed this step; migrations count particles
/// that crossed an ownership frontier during the motion phase;
/// cost_migrated is the grid-element cost relocated by a rebalance.
struct StepMetrics {
    int step = 0;
    std::vector<long long> rank_load;
    double imbalance = 1.0;
    long long particles_migrated = 0;
    double cost_migrated = 0.0;
    long long perimeter = 0;
    std::vector<int> touched_elements;  // distinct elements per rank (CIC stencils)
    std::vector<double> locality;       // touched / owned (Eulerian) or / total (Lagrangian)
    double locality_max = 0.0;
    int solver_iters = 0;
    double solver_residual = 0.0;
    bool solver_converged = true;
    double field_energy = 0.0;

    long long max_load() const;
    double mean_load() const;
};

/// Virtual-rank superstep engine. Ranks are bookkeeping entities: the PIC
/// phases run globally and deterministically; ownership, migration and
/// communication are accounted per rank, never transported.
class Harness {
public:
    explicit Harness(const RunConfig& cfg);
    /// Replay constructor: same bookkeeping, caller-provided particle set
    /// (ids must be unique). Used by tests to stage exact crossings.
    Harness(const RunConfig& cfg, std::vector<Particle> particles);

    StepMetrics step();
    int step_index() const { return step_; }

    const RunConfig& config() const { return cfg_; }
    const PartitionMap& partition() const { return map_; }
    const std::vector<Particle>& particles() const { return particles_; }
    const std::vector<int>& particle_owner() const { return owner_; }
    /// Per-rank bitmsks of elements whose field data the rank's particles
    /// read during the last step (empty before the first step).
    const std::vector<std::vector<char>>& touched_sets() const { return touched_; }
    bool initial_solve_converged() const { return init_solve_converged_; }

    /// Cost field of the current particle positions (plus beta-weighted
    /// finite-element counts).
    CostField current_cost_field() const;

    /// Eulerian invariant: after migration, no particle sits on an element
    /// owned by another rank. Always true for Lagrangian runs.
    bool ownership_consistent() const;

private:
    void init_partition();
    void init_fields_and_half_kick();
    std::vector<long long> element_particle_counts() const;
    std::vector<double> region_loads(const PartitionMap& map, const CostField& cf) const;
    void rebalance(const CostField& cf, StepMetrics& m);

    RunConfig cfg_;
    Domain dom_;
    GridElementGrid geg_;
    FieldGrid fg_;
    std::vector<long long> fe_counts_;

    std::vector<Particle> particles_;
    std::vector<int> owner_;  // owning rank per particle, indexed like particles_
    PartitionMap map_;
    std::optional<PartitionTree> tree_;    // kept for UrbLimited
    std::optional<OrbHLayout> layout_;     // kept for OrbH
    std::vector<std::vector<char>> touched_;
    long long lb_iteration_ = 0;
    int step_ = 0;
    bool init_solve_converged_ = true;
};

/// Run a whole configuration and collect the per-step series.
std::vector<StepMetrics> run(const RunConfig& cfg);

}  // namespace piclb
