#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "piclb/cost_field.hpp"
#include "piclb/geometry.hpp"

namespace piclb {

enum class CutAxis { X, Y };

/// Leaf record of the decomposition tree: one rank, its element rectangle,
/// and the level of the node in the tree (root = 0).
struct Subdomain {
    int pid = 0;
    ElementRect rect;
    int height = 0;
};

struct PartitionNode {
    ElementRect rect;
    int rank_begin = 0;
    int rank_end = 0;  // [rank_begin, rank_end)
    int height = 0;
    CutAxis axis = CutAxis::X;
    int cut_index = -1;  // absolute element-boundary index along axis; -1 on leaves
    std::unique_ptr<PartitionNode> left;
    std::unique_ptr<PartitionNode> right;

    bool leaf() const { return !left; }
    int pid() const { return rank_begin; }
    int rank_count() const { return rank_end - rank_begin; }
};

struct PartitionTree {
    std::unique_ptr<PartitionNode> root;
    int ranks = 0;

    std::vector<Subdomain> leaves() const;
};

/// Flattened ownership: one rank id per grid element.
struct PartitionMap {
    int gx = 0;
    int gy = 0;
    int ranks = 0;
    std::vector<int> owner;  // j*gx + i

    int at(int i, int j) const { return owner[static_cast<std::size_t>(j) * gx + i]; }
    int& at(int i, int j) { return owner[static_cast<std::size_t>(j) * gx + i]; }
};

/// Static reference mapping: ranks arranged on the most-square factor grid,
/// each owning a contiguous block of elements (sizes differ by at most one
/// per axis). Ignores the cost function entirely.
PartitionMap uniform_blocks(int ranks, const GridElementGrid& geg);

/// Element-boundary cut along `axis` splitting `rect` so the lower part's
/// cost is closest to target_fraction of the rectangle's total. Returns the
/// relative boundary index k in [1, extent); ties resolve to the smaller k.
int find_cut(const CostField& cf, const ElementRect& rect, CutAxis axis,
             double target_fraction);

/// Recursive coordinate bisection: equal rank halves, cut dimension
/// alternating by level starting along x, each cut at the half-cost point.
/// Requires a power-of-two rank count.
PartitionTree rcb(const CostField& cf, int ranks);

/// Unbalanced recursive bisection: rank counts split floor/ceil (smaller
/// half left), the cut fraction follows the rank split, cut dimension
/// alternating by level. Works for any rank count.
PartitionTree urb(const CostField& cf, int ranks, CutAxis first_axis = CutAxis::X);

/// Rebuild `prev` against new costs, keeping topology, rank assignment and
/// cut dimensions. Cuts at levels below adjust_depth_min are frozen
/// bit-identically; deeper cuts are re-optimized, so each leaf moves along
/// at most the frontiers of its deepest ancestors.
PartitionTree urb_limited(const PartitionTree& prev, const CostField& cf,
                          int adjust_depth_min);

PartitionMap tree_to_map(const PartitionTree& tree);

/// Total cost of the elements whose owner differs between the two maps.
double migration_cost(const PartitionMap& before, const PartitionMap& after,
                      const CostField& cf);

/// Number of 4-neighborhood element pairs (periodic, wrap seams included)
/// whose owners differ; the communication-volume proxy.
long long boundary_perimeter(const PartitionMap& map);

/// Text format: header "gx gy P", then gy rows of gx owner ids, row 0 first.
void write_partition_map(std::ostream& os, const PartitionMap& map);
PartitionMap read_partition_map(std::istream& is);

/// Owners all in range and, when ranks > 0, every rank present.
bool partition_map_valid(const PartitionMap& map);

}  // namespace piclb
