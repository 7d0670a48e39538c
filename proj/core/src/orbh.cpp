#include "piclb/orbh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "piclb/detail/search.hpp"

namespace piclb {

namespace {

using detail::closest_monotone;

// Equal-load row split of a column rectangle into n slots, one cut at a
// time against the remaining load. Every slot keeps at least one row.
std::vector<int> split_rows(const CostField& cf, int ix0, int ix1, int slots, int gy) {
    std::vector<int> bounds;
    bounds.reserve(static_cast<std::size_t>(slots) + 1);
    bounds.push_back(0);
    int y0 = 0;
    for (int s = 0; s < slots - 1; ++s) {
        const int remaining_slots = slots - s;
        const ElementRect rest{ix0, ix1, y0, gy};
        const double target = cf.region_cost(rest) / remaining_slots;
        const int kmax = (gy - y0) - (remaining_slots - 1);
        auto lower_cost = [&](int k) {
            return cf.region_cost({ix0, ix1, y0, y0 + k});
        };
        const int k = closest_monotone(lower_cost, 1, kmax, target);
        y0 += k;
        bounds.push_back(y0);
    }
    bounds.push_back(gy);
    return bounds;
}

double column_load(const CostField& cf, const OrbHLayout& layout, int c) {
    return cf.region_cost({layout.col_bounds[c], layout.col_bounds[c + 1], 0, layout.gy});
}

}  // namespace

int OrbHLayout::ranks() const {
    int n = 0;
    for (const auto& col : slot_rank) n += static_cast<int>(col.size());
    return n;
}

bool OrbHLayout::valid() const {
    if (gx < 1 || gy < 1) return false;
    const int c = columns();
    if (c < 1 || col_bounds.front() != 0 || col_bounds.back() != gx) return false;
    if (row_bounds.size() != static_cast<std::size_t>(c) ||
        slot_rank.size() != static_cast<std::size_t>(c))
        return false;
    std::vector<char> seen(static_cast<std::size_t>(ranks()), 0);
    for (int i = 0; i < c; ++i) {
        if (col_bounds[i] >= col_bounds[i + 1]) return false;
        const int s = slots(i);
        if (s < 1 || static_cast<int>(slot_rank[i].size()) != s) return false;
        if (row_bounds[i].front() != 0 || row_bounds[i].back() != gy) return false;
        for (int k = 0; k < s; ++k) {
            if (row_bounds[i][k] >= row_bounds[i][k + 1]) return false;
            const int r = slot_rank[i][k];
            if (r < 0 || r >= ranks() || seen[static_cast<std::size_t>(r)]) return false;
            seen[static_cast<std::size_t>(r)] = 1;
        }
    }
    return true;
}

OrbHLayout orbh_init(const CostField& cf, const std::vector<int>& column_ranks) {
    const int columns = static_cast<int>(column_ranks.size());
    if (columns < 1) throw std::invalid_argument("orbh_init: need at least one column");
    int total_ranks = 0;
    int max_slots = 0;
    for (int n : column_ranks) {
        if (n < 1) throw std::invalid_argument("orbh_init: empty column in rank layout");
        total_ranks += n;
        max_slots = std::max(max_slots, n);
    }
    if (columns > cf.gx())
        throw std::invalid_argument("orbh_init: more columns than element columns");
    if (max_slots > cf.gy())
        throw std::invalid_argument("orbh_init: more ranks in a column than element rows");

    OrbHLayout layout;
    layout.gx = cf.gx();
    layout.gy = cf.gy();
    layout.col_bounds.push_back(0);

    int x0 = 0;
    int ranks_left = total_ranks;
    for (int c = 0; c < columns - 1; ++c) {
        const ElementRect rest{x0, cf.gx(), 0, cf.gy()};
        const double target =
            cf.region_cost(rest) * (static_cast<double>(column_ranks[c]) / ranks_left);
        const int kmax = (cf.gx() - x0) - (columns - 1 - c);
        auto lower_cost = [&](int k) {
            return cf.region_cost({x0, x0 + k, 0, cf.gy()});
        };
        const int k = closest_monotone(lower_cost, 1, kmax, target);
        x0 += k;
        ranks_left -= column_ranks[c];
        layout.col_bounds.push_back(x0);
    }
    layout.col_bounds.push_back(cf.gx());

    int next_rank = 0;
    for (int c = 0; c < columns; ++c) {
        layout.row_bounds.push_back(split_rows(cf, layout.col_bounds[c], layout.col_bounds[c + 1],
                                               column_ranks[c], cf.gy()));
        std::vector<int> ids(static_cast<std::size_t>(column_ranks[c]));
        std::iota(ids.begin(), ids.end(), next_rank);
        next_rank += column_ranks[c];
        layout.slot_rank.push_back(std::move(ids));
    }
    return layout;
}

std::vector<int> default_column_ranks(int ranks) {
    if (ranks < 1) throw std::invalid_argument("default_column_ranks: ranks must be >= 1");
    int columns = static_cast<int>(std::lround(std::sqrt(static_cast<double>(ranks))));
    columns = std::clamp(columns, 1, ranks);
    std::vector<int> out(static_cast<std::size_t>(columns), ranks / columns);
    const int extra = ranks % columns;
    for (int c = columns - extra; c < columns; ++c) ++out[static_cast<std::size_t>(c)];
    return out;
}

double diffusion_target(double w_i, double w_j, const DiffusionParams& p) {
    return p.alpha * (w_j - w_i) + p.eta - p.consumed;
}

std::vector<std::pair<int, int>> parity_slot_pairs(int slots, long long t) {
    std::vector<std::pair<int, int>> pairs;
    for (int s = (t % 2 == 0) ? 0 : 1; s + 1 < slots; s += 2) pairs.emplace_back(s, s + 1);
    return pairs;
}

std::vector<std::pair<int, int>> grid_mod4_pairs(int rows, int cols, long long t) {
    std::vector<std::pair<int, int>> pairs;
    auto rank = [cols](int r, int c) { return r * cols + c; };
    switch (static_cast<int>(t % 4)) {
        case 0:  // even columns pair with their right neighbor
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c + 1 < cols; c += 2) pairs.emplace_back(rank(r, c), rank(r, c + 1));
            break;
        case 1:  // odd columns pair with their right neighbor
            for (int r = 0; r < rows; ++r)
                for (int c = 1; c + 1 < cols; c += 2) pairs.emplace_back(rank(r, c), rank(r, c + 1));
            break;
        case 2:  // even rows pair with the row above
            for (int r = 0; r + 1 < rows; r += 2)
                for (int c = 0; c < cols; ++c) pairs.emplace_back(rank(r, c), rank(r + 1, c));
            break;
        default:  // odd rows pair with the row above
            for (int r = 1; r + 1 < rows; r += 2)
                for (int c = 0; c < cols; ++c) pairs.emplace_back(rank(r, c), rank(r + 1, c));
            break;
    }
    return pairs;
}

std::vector<ExchangeMove> diffusion_round(OrbHLayout& layout, const CostField& cf,
                                          long long t, const DiffusionParams& p) {
    std::vector<ExchangeMove> moves;
    for (int c = 0; c < layout.columns(); ++c) {
        // Pairs are disjoint and each owns its shared frontier, so applying
        // them in order equals applying them simultaneously.
        for (const auto& [a, b] : parity_slot_pairs(layout.slots(c), t)) {
            const double w_a = cf.region_cost(layout.region(c, a));
            const double w_b = cf.region_cost(layout.region(c, b));
            const double delta = diffusion_target(w_a, w_b, p);

            ExchangeMove mv;
            if (delta > 0.0) {
                // b sends rows at its lower frontier down to a
                const int y_front = layout.row_bounds[c][b];
                const int max_rows = layout.row_bounds[c][b + 1] - y_front - 1;
                auto prefix = [&](int m) {
                    return cf.region_cost(
                        {layout.col_bounds[c], layout.col_bounds[c + 1], y_front, y_front + m});
                };
                const int m = closest_monotone(prefix, 0, max_rows, delta);
                mv = {layout.slot_rank[c][b], layout.slot_rank[c][a], m, prefix(m)};
                layout.row_bounds[c][b] += m;
            } else {
                // a sends rows at its upper frontier up to b
                const int y_front = layout.row_bounds[c][a + 1];
                const int max_rows = y_front - layout.row_bounds[c][a] - 1;
                auto prefix = [&](int m) {
                    return cf.region_cost(
                        {layout.col_bounds[c], layout.col_bounds[c + 1], y_front - m, y_front});
                };
                const int m = closest_monotone(prefix, 0, max_rows, -delta);
                mv = {layout.slot_rank[c][a], layout.slot_rank[c][b], m, prefix(m)};
                layout.row_bounds[c][a + 1] -= m;
            }
            moves.push_back(mv);
        }
    }
    return moves;
}

std::vector<ExchangeMove> column_exchange(OrbHLayout& layout, const CostField& cf,
                                          long long t, const DiffusionParams& p) {
    std::vector<ExchangeMove> moves;
    if (layout.columns() < 2) return moves;
    const long long round = t / std::max(1, p.column_period);
    for (const auto& [a, b] : parity_slot_pairs(layout.columns(), round)) {
        const double w_a = column_load(cf, layout, a);
        const double w_b = column_load(cf, layout, b);
        const double delta = diffusion_target(w_a, w_b, p);

        int m = 0;
        ExchangeMove mv;
        if (delta > 0.0) {
            const int x_front = layout.col_bounds[b];
            const int max_cols = layout.col_bounds[b + 1] - x_front - 1;
            auto prefix = [&](int k) {
                return cf.region_cost({x_front, x_front + k, 0, layout.gy});
            };
            m = closest_monotone(prefix, 0, max_cols, delta);
            mv = {layout.slot_rank[b][0], layout.slot_rank[a][0], m, prefix(m)};
            layout.col_bounds[b] += m;
        } else {
            const int x_front = layout.col_bounds[a + 1];
            const int max_cols = x_front - layout.col_bounds[a] - 1;
            auto prefix = [&](int k) {
                return cf.region_cost({x_front - k, x_front, 0, layout.gy});
            };
            m = closest_monotone(prefix, 0, max_cols, -delta);
            mv = {layout.slot_rank[a][0], layout.slot_rank[b][0], m, prefix(m)};
            layout.col_bounds[a + 1] -= m;
        }
        if (m > 0) {
            for (int c : {a, b})
                layout.row_bounds[static_cast<std::size_t>(c)] =
                    split_rows(cf, layout.col_bounds[c], layout.col_bounds[c + 1],
                               layout.slots(c), layout.gy);
        }
        moves.push_back(mv);
    }
    return moves;
}

PartitionMap orbh_to_map(const OrbHLayout& layout) {
    PartitionMap map;
    map.gx = layout.gx;
    map.gy = layout.gy;
    map.ranks = layout.ranks();
    map.owner.assign(static_cast<std::size_t>(layout.gx) * layout.gy, -1);
    for (int c = 0; c < layout.columns(); ++c)
        for (int s = 0; s < layout.slots(c); ++s) {
            const ElementRect r = layout.region(c, s);
            for (int j = r.iy0; j < r.iy1; ++j)
                for (int i = r.ix0; i < r.ix1; ++i) map.at(i, j) = layout.slot_rank[c][s];
        }
    for (int v : map.owner)
        if (v < 0) throw std::logic_error("orbh_to_map: uncovered grid element");
    return map;
}

}  // namespace piclb
