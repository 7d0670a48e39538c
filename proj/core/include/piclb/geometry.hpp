#pragma once

#include <cmath>
#include <utility>

namespace piclb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Rectangular periodic domain, periodic in both axes.
struct Domain {
    double lx = 1.0;
    double ly = 1.0;
};

/// Regular grid of uncuttable rectangular grid elements tiling the domain.
/// Grid elements are the atoms the partitioners work with.
struct GridElementGrid {
    int gx = 1;
    int gy = 1;

    int element_count() const { return gx * gy; }
    double element_width(const Domain& dom) const { return dom.lx / gx; }
    double element_height(const Domain& dom) const { return dom.ly / gy; }
};

/// Node-centered periodic field grid. nx and ny must be multiples of the
/// grid-element counts so every element contains a whole number of cells.
struct FieldGrid {
    int nx = 1;
    int ny = 1;

    double hx(const Domain& dom) const { return dom.lx / nx; }
    double hy(const Domain& dom) const { return dom.ly / ny; }
    int node_count() const { return nx * ny; }
};

/// Half-open rectangle of grid-element indices: [ix0,ix1) x [iy0,iy1).
struct ElementRect {
    int ix0 = 0;
    int ix1 = 0;
    int iy0 = 0;
    int iy1 = 0;

    int width() const { return ix1 - ix0; }
    int height() const { return iy1 - iy0; }
    bool empty() const { return width() <= 0 || height() <= 0; }
    long long count() const {
        return empty() ? 0 : static_cast<long long>(width()) * height();
    }
    bool contains(int i, int j) const {
        return i >= ix0 && i < ix1 && j >= iy0 && j < iy1;
    }
    bool operator==(const ElementRect&) const = default;
};

/// Wrap a coordinate into [0, extent).
inline double wrap_coord(double v, double extent) {
    v -= extent * std::floor(v / extent);
    if (v < 0.0 || v >= extent) v = 0.0;  // guard against rounding at the seam
    return v;
}

inline Vec2 wrap_position(Vec2 p, const Domain& dom) {
    return {wrap_coord(p.x, dom.lx), wrap_coord(p.y, dom.ly)};
}

/// Locate the grid element containing a position. The position is wrapped
/// first, so any finite input maps to an in-range index pair.
inline std::pair<int, int> locate_grid_element(Vec2 pos, const GridElementGrid& geg,
                                               const Domain& dom) {
    const double x = wrap_coord(pos.x, dom.lx);
    const double y = wrap_coord(pos.y, dom.ly);
    int i = static_cast<int>(x * geg.gx / dom.lx);
    int j = static_cast<int>(y * geg.gy / dom.ly);
    if (i >= geg.gx) i = geg.gx - 1;
    if (j >= geg.gy) j = geg.gy - 1;
    return {i, j};
}

}  // namespace piclb
