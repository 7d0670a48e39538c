#pragma once

#include <utility>
#include <vector>

#include "piclb/cost_field.hpp"
#include "piclb/geometry.hpp"
#include "piclb/partition.hpp"

namespace piclb {

/// Strip decomposition: the x-axis is cut once into columns, each column's
/// y-axis is cut among the ranks assigned to it. Every frontier between two
/// slots of a column can move independently, which is what the pairwise
/// exchanger needs.
struct OrbHLayout {
    int gx = 0;
    int gy = 0;
    std::vector<int> col_bounds;                // size C+1: 0 .. gx
    std::vector<std::vector<int>> row_bounds;   // per column, size slots+1: 0 .. gy
    std::vector<std::vector<int>> slot_rank;    // rank id per (column, slot)

    int columns() const { return static_cast<int>(col_bounds.size()) - 1; }
    int slots(int c) const { return static_cast<int>(row_bounds[c].size()) - 1; }
    int ranks() const;
    ElementRect region(int c, int s) const {
        return {col_bounds[c], col_bounds[c + 1], row_bounds[c][s], row_bounds[c][s + 1]};
    }
    bool valid() const;
};

/// First-order diffusion exchange parameters: transfer = alpha*(w_j - w_i)
/// + eta - consumed. Work neither appears nor vanishes here, so eta and
/// consumed default to zero and alpha to 1/2.
struct DiffusionParams {
    double alpha = 0.5;
    double eta = 0.0;
    double consumed = 0.0;
    int column_period = 4;  // inter-column exchanges every this many rounds
};

/// One realized pairwise transfer: `units` whole element rows (or columns
/// for the inter-column exchange) of total cost `cost` moved from -> to.
struct ExchangeMove {
    int rank_from = -1;
    int rank_to = -1;
    int units = 0;
    double cost = 0.0;
};

/// Split the columns by repeated cut search so each column's load tracks its
/// share of ranks, then split each column's rows into equal-load slots.
/// column_ranks lists how many ranks each column receives, left to right.
OrbHLayout orbh_init(const CostField& cf, const std::vector<int>& column_ranks);

/// Balanced default column layout: about sqrt(P) columns, remainder ranks
/// going to the rightmost columns.
std::vector<int> default_column_ranks(int ranks);

/// Signed load transfer for a pair; positive means j sends to i.
double diffusion_target(double w_i, double w_j, const DiffusionParams& p);

/// Disjoint neighbor pairs (s, s+1) within a path of `slots` nodes for round
/// t: even rounds pair (0,1),(2,3),...; odd rounds pair (1,2),(3,4),...
/// Unpaired slots sit the round out.
std::vector<std::pair<int, int>> parity_slot_pairs(int slots, long long t);

/// Mod-4 channel schedule for a full pr x pc rank grid (channel order:
/// right, left, up, down pairings). Ranks whose channel does not exist this
/// round do not participate. Returned pairs are disjoint.
std::vector<std::pair<int, int>> grid_mod4_pairs(int rows, int cols, long long t);

/// One within-column exchange round: scheduled slot pairs move whole
/// boundary-adjacent element rows from the heavier side, choosing the prefix
/// whose cost lands closest to the diffusion target (ties move fewer rows).
/// A rank never surrenders its last row. Total load is conserved.
std::vector<ExchangeMove> diffusion_round(OrbHLayout& layout, const CostField& cf,
                                          long long t, const DiffusionParams& p);

/// Inter-column exchange at column granularity: adjacent column pairs
/// (parity-alternating on t / column_period) shift the shared column cut
/// toward the diffusion target computed on total column loads, then the row
/// cuts of the changed columns are re-derived by equal-load splitting.
/// No-op with fewer than two columns.
std::vector<ExchangeMove> column_exchange(OrbHLayout& layout, const CostField& cf,
                                          long long t, const DiffusionParams& p);

PartitionMap orbh_to_map(const OrbHLayout& layout);

}  // namespace piclb
