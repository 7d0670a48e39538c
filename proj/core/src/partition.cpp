#include "piclb/partition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "piclb/detail/search.hpp"

namespace piclb {

namespace {

using detail::closest_monotone;

int rect_extent(const ElementRect& rect, CutAxis axis) {
    return axis == CutAxis::X ? rect.width() : rect.height();
}

ElementRect lower_part(const ElementRect& rect, CutAxis axis, int k) {
    ElementRect r = rect;
    if (axis == CutAxis::X)
        r.ix1 = rect.ix0 + k;
    else
        r.iy1 = rect.iy0 + k;
    return r;
}

ElementRect upper_part(const ElementRect& rect, CutAxis axis, int k) {
    ElementRect r = rect;
    if (axis == CutAxis::X)
        r.ix0 = rect.ix0 + k;
    else
        r.iy0 = rect.iy0 + k;
    return r;
}

// Cut search restricted to [kmin, kmax]; target is an absolute cost.
int find_cut_bounded(const CostField& cf, const ElementRect& rect, CutAxis axis,
                     double target, int kmin, int kmax) {
    auto left_cost = [&](int k) { return cf.region_cost(lower_part(rect, axis, k)); };
    return closest_monotone(left_cost, kmin, kmax, target);
}

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

// Feasible relative-cut range [kmin, kmax] along axis such that both sides
// keep at least as many elements as ranks. Returns false if none exists.
bool cut_bounds(const ElementRect& rect, CutAxis axis, int n_left, int n_right,
                int& kmin, int& kmax) {
    const int ext = rect_extent(rect, axis);
    if (ext < 2) return false;
    const long long other =
        axis == CutAxis::X ? rect.height() : rect.width();
    kmin = static_cast<int>(std::max<long long>(1, ceil_div(n_left, other)));
    kmax = static_cast<int>(ext - std::max<long long>(1, ceil_div(n_right, other)));
    return kmin <= kmax;
}

CutAxis other_axis(CutAxis a) { return a == CutAxis::X ? CutAxis::Y : CutAxis::X; }

struct TreeBuilder {
    const CostField& cf;
    CutAxis first_axis;

    CutAxis scheduled_axis(int depth) const {
        const bool even = depth % 2 == 0;
        if (first_axis == CutAxis::X) return even ? CutAxis::X : CutAxis::Y;
        return even ? CutAxis::Y : CutAxis::X;
    }

    std::unique_ptr<PartitionNode> build(const ElementRect& rect, int rank_begin,
                                         int rank_end, int depth) {
        auto node = std::make_unique<PartitionNode>();
        node->rect = rect;
        node->rank_begin = rank_begin;
        node->rank_end = rank_end;
        node->height = depth;
        const int n = rank_end - rank_begin;
        if (rect.count() < n)
            throw std::invalid_argument("partition: more ranks than grid elements in subdomain");
        if (n == 1) return node;

        const int n_left = n / 2;
        const int n_right = n - n_left;
        CutAxis axis = scheduled_axis(depth);
        int kmin = 0, kmax = 0;
        if (!cut_bounds(rect, axis, n_left, n_right, kmin, kmax)) {
            axis = other_axis(axis);
            if (!cut_bounds(rect, axis, n_left, n_right, kmin, kmax))
                throw std::invalid_argument(
                    "partition: subdomain cannot be split for its rank count");
        }
        const double target =
            cf.region_cost(rect) * (static_cast<double>(n_left) / static_cast<double>(n));
        const int k = find_cut_bounded(cf, rect, axis, target, kmin, kmax);

        node->axis = axis;
        node->cut_index = (axis == CutAxis::X ? rect.ix0 : rect.iy0) + k;
        node->left = build(lower_part(rect, axis, k), rank_begin, rank_begin + n_left, depth + 1);
        node->right = build(upper_part(rect, axis, k), rank_begin + n_left, rank_end, depth + 1);
        return node;
    }
};

void collect_leaves(const PartitionNode& node, std::vector<Subdomain>& out) {
    if (node.leaf()) {
        out.push_back({node.pid(), node.rect, node.height});
        return;
    }
    collect_leaves(*node.left, out);
    collect_leaves(*node.right, out);
}

void validate_tree_inputs(const CostField& cf, int ranks) {
    if (ranks < 1) throw std::invalid_argument("partition: ranks must be >= 1");
    if (static_cast<long long>(ranks) > static_cast<long long>(cf.gx()) * cf.gy())
        throw std::invalid_argument("partition: more ranks than grid elements");
}

}  // namespace

std::vector<Subdomain> PartitionTree::leaves() const {
    std::vector<Subdomain> out;
    if (root) collect_leaves(*root, out);
    return out;
}

PartitionMap uniform_blocks(int ranks, const GridElementGrid& geg) {
    if (ranks < 1) throw std::invalid_argument("uniform_blocks: ranks must be >= 1");
    if (ranks > geg.element_count())
        throw std::invalid_argument("uniform_blocks: more ranks than grid elements");

    // most-square factor pair that fits the grid; ties prefer more columns
    int best_pc = -1, best_pr = -1;
    double best_ratio = 0.0;
    for (int pr = 1; pr <= ranks; ++pr) {
        if (ranks % pr != 0) continue;
        const int pc = ranks / pr;
        if (pc > geg.gx || pr > geg.gy) continue;
        const double ratio = static_cast<double>(std::max(pc, pr)) / std::min(pc, pr);
        if (best_pc < 0 || ratio < best_ratio ||
            (ratio == best_ratio && pc > best_pc)) {
            best_pc = pc;
            best_pr = pr;
            best_ratio = ratio;
        }
    }
    if (best_pc < 0)
        throw std::invalid_argument("uniform_blocks: no factor grid fits the element grid");

    PartitionMap map;
    map.gx = geg.gx;
    map.gy = geg.gy;
    map.ranks = ranks;
    map.owner.assign(static_cast<std::size_t>(geg.gx) * geg.gy, -1);
    for (int r = 0; r < best_pr; ++r) {
        const int j0 = static_cast<int>(static_cast<long long>(r) * geg.gy / best_pr);
        const int j1 = static_cast<int>(static_cast<long long>(r + 1) * geg.gy / best_pr);
        for (int c = 0; c < best_pc; ++c) {
            const int i0 = static_cast<int>(static_cast<long long>(c) * geg.gx / best_pc);
            const int i1 = static_cast<int>(static_cast<long long>(c + 1) * geg.gx / best_pc);
            for (int j = j0; j < j1; ++j)
                for (int i = i0; i < i1; ++i) map.at(i, j) = r * best_pc + c;
        }
    }
    return map;
}

int find_cut(const CostField& cf, const ElementRect& rect, CutAxis axis,
             double target_fraction) {
    const int ext = rect_extent(rect, axis);
    if (ext < 2) throw std::invalid_argument("find_cut: rectangle degenerate along cut axis");
    if (!(target_fraction > 0.0 && target_fraction < 1.0))
        throw std::invalid_argument("find_cut: target_fraction must be in (0,1)");
    const double target = target_fraction * cf.region_cost(rect);
    return find_cut_bounded(cf, rect, axis, target, 1, ext - 1);
}

PartitionTree rcb(const CostField& cf, int ranks) {
    validate_tree_inputs(cf, ranks);
    if ((ranks & (ranks - 1)) != 0)
        throw std::invalid_argument(
            "rcb: rank count must be a power of two; use urb for arbitrary counts");
    TreeBuilder b{cf, CutAxis::X};
    PartitionTree tree;
    tree.ranks = ranks;
    tree.root = b.build(cf.full_rect(), 0, ranks, 0);
    return tree;
}

PartitionTree urb(const CostField& cf, int ranks, CutAxis first_axis) {
    validate_tree_inputs(cf, ranks);
    TreeBuilder b{cf, first_axis};
    PartitionTree tree;
    tree.ranks = ranks;
    tree.root = b.build(cf.full_rect(), 0, ranks, 0);
    return tree;
}

namespace {

std::unique_ptr<PartitionNode> rebuild_limited(const PartitionNode& prev, const CostField& cf,
                                               const ElementRect& rect, int depth,
                                               int adjust_depth_min) {
    auto node = std::make_unique<PartitionNode>();
    node->rect = rect;
    node->rank_begin = prev.rank_begin;
    node->rank_end = prev.rank_end;
    node->height = depth;
    if (prev.leaf()) {
        if (rect.count() < 1)
            throw std::invalid_argument("urb_limited: leaf squeezed to zero elements");
        return node;
    }

    const int n_left = prev.left->rank_count();
    const int n_right = prev.right->rank_count();
    CutAxis axis = prev.axis;
    int k;
    if (depth < adjust_depth_min) {
        // frozen: ancestors are frozen too, so the rectangle matches prev
        k = prev.cut_index - (axis == CutAxis::X ? rect.ix0 : rect.iy0);
    } else {
        int kmin = 0, kmax = 0;
        if (!cut_bounds(rect, axis, n_left, n_right, kmin, kmax)) {
            axis = other_axis(axis);
            if (!cut_bounds(rect, axis, n_left, n_right, kmin, kmax))
                throw std::invalid_argument(
                    "urb_limited: subdomain cannot be split for its rank count");
        }
        const double target = cf.region_cost(rect) *
                              (static_cast<double>(n_left) / static_cast<double>(n_left + n_right));
        k = find_cut_bounded(cf, rect, axis, target, kmin, kmax);
    }
    node->axis = axis;
    node->cut_index = (axis == CutAxis::X ? rect.ix0 : rect.iy0) + k;
    node->left = rebuild_limited(*prev.left, cf, lower_part(rect, axis, k), depth + 1,
                                 adjust_depth_min);
    node->right = rebuild_limited(*prev.right, cf, upper_part(rect, axis, k), depth + 1,
                                  adjust_depth_min);
    return node;
}

}  // namespace

PartitionTree urb_limited(const PartitionTree& prev, const CostField& cf,
                          int adjust_depth_min) {
    if (!prev.root) throw std::invalid_argument("urb_limited: previous tree is empty");
    if (prev.root->rect != cf.full_rect())
        throw std::invalid_argument("urb_limited: cost-field extents mismatch");
    if (adjust_depth_min < 0)
        throw std::invalid_argument("urb_limited: adjust_depth_min must be >= 0");
    PartitionTree tree;
    tree.ranks = prev.ranks;
    tree.root = rebuild_limited(*prev.root, cf, cf.full_rect(), 0, adjust_depth_min);
    return tree;
}

PartitionMap tree_to_map(const PartitionTree& tree) {
    if (!tree.root) throw std::invalid_argument("tree_to_map: empty tree");
    PartitionMap map;
    map.gx = tree.root->rect.width();
    map.gy = tree.root->rect.height();
    map.ranks = tree.ranks;
    map.owner.assign(static_cast<std::size_t>(map.gx) * map.gy, -1);
    for (const Subdomain& leaf : tree.leaves()) {
        for (int j = leaf.rect.iy0; j < leaf.rect.iy1; ++j)
            for (int i = leaf.rect.ix0; i < leaf.rect.ix1; ++i) {
                if (map.at(i, j) != -1)
                    throw std::logic_error("tree_to_map: overlapping leaf rectangles");
                map.at(i, j) = leaf.pid;
            }
    }
    for (int v : map.owner)
        if (v < 0) throw std::logic_error("tree_to_map: uncovered grid element");
    return map;
}

double migration_cost(const PartitionMap& before, const PartitionMap& after,
                      const CostField& cf) {
    if (before.gx != after.gx || before.gy != after.gy || before.gx != cf.gx() ||
        before.gy != cf.gy())
        throw std::invalid_argument("migration_cost: extents mismatch");
    double moved = 0.0;
    for (int j = 0; j < before.gy; ++j)
        for (int i = 0; i < before.gx; ++i)
            if (before.at(i, j) != after.at(i, j)) moved += cf.cost(i, j);
    return moved;
}

long long boundary_perimeter(const PartitionMap& map) {
    long long seams = 0;
    for (int j = 0; j < map.gy; ++j) {
        for (int i = 0; i < map.gx; ++i) {
            if (map.gx > 1 && map.at(i, j) != map.at((i + 1) % map.gx, j)) ++seams;
            if (map.gy > 1 && map.at(i, j) != map.at(i, (j + 1) % map.gy)) ++seams;
        }
    }
    return seams;
}

void write_partition_map(std::ostream& os, const PartitionMap& map) {
    os << map.gx << ' ' << map.gy << ' ' << map.ranks << '\n';
    for (int j = 0; j < map.gy; ++j) {
        for (int i = 0; i < map.gx; ++i) {
            if (i) os << ' ';
            os << map.at(i, j);
        }
        os << '\n';
    }
}

PartitionMap read_partition_map(std::istream& is) {
    PartitionMap map;
    if (!(is >> map.gx >> map.gy >> map.ranks) || map.gx < 1 || map.gy < 1 || map.ranks < 1)
        throw std::runtime_error("read_partition_map: bad header");
    map.owner.assign(static_cast<std::size_t>(map.gx) * map.gy, -1);
    for (int j = 0; j < map.gy; ++j)
        for (int i = 0; i < map.gx; ++i) {
            int v;
            if (!(is >> v)) throw std::runtime_error("read_partition_map: truncated owner rows");
            map.at(i, j) = v;
        }
    if (!partition_map_valid(map)) throw std::runtime_error("read_partition_map: invalid owners");
    return map;
}

bool partition_map_valid(const PartitionMap& map) {
    if (map.gx < 1 || map.gy < 1 || map.ranks < 1) return false;
    if (map.owner.size() != static_cast<std::size_t>(map.gx) * map.gy) return false;
    std::vector<char> seen(static_cast<std::size_t>(map.ranks), 0);
    for (int v : map.owner) {
        if (v < 0 || v >= map.ranks) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace piclb
