#include <doctest.h>

#include <random>

#include "piclb/geometry.hpp"

using namespace piclb;

TEST_CASE("locate_grid_element pinned cases") {
    const Domain dom{1.0, 1.0};
    const GridElementGrid geg{4, 4};
    CHECK(locate_grid_element({0.0, 0.0}, geg, dom) == std::pair{0, 0});
    CHECK(locate_grid_element({0.99, 0.99}, geg, dom) == std::pair{3, 3});
    // floor(0.26*4) = 1, floor(0.51*4) = 2
    CHECK(locate_grid_element({0.26, 0.51}, geg, dom) == std::pair{1, 2});
}

TEST_CASE("locate_grid_element wraps upper boundary and negatives") {
    const Domain dom{2.0, 3.0};
    const GridElementGrid geg{5, 7};
    CHECK(locate_grid_element({2.0, 3.0}, geg, dom) == std::pair{0, 0});
    CHECK(locate_grid_element({-0.1, -0.1}, geg, dom) ==
          locate_grid_element({1.9, 2.9}, geg, dom));
}

TEST_CASE("locate_grid_element returns in-range index containing the position") {
    const Domain dom{2.5, 1.75};
    const GridElementGrid geg{13, 9};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> span(-20.0, 20.0);
    for (int trial = 0; trial < 20000; ++trial) {
        const Vec2 p{span(rng), span(rng)};
        const auto [i, j] = locate_grid_element(p, geg, dom);
        REQUIRE(i >= 0);
        REQUIRE(i < geg.gx);
        REQUIRE(j >= 0);
        REQUIRE(j < geg.gy);
        const Vec2 w = wrap_position(p, dom);
        const double ew = geg.element_width(dom);
        const double eh = geg.element_height(dom);
        REQUIRE(w.x >= i * ew - 1e-12);
        REQUIRE(w.x < (i + 1) * ew + 1e-12);
        REQUIRE(w.y >= j * eh - 1e-12);
        REQUIRE(w.y < (j + 1) * eh + 1e-12);
    }
}

TEST_CASE("wrap_coord stays in [0, extent)") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> span(-1e6, 1e6);
    for (int trial = 0; trial < 20000; ++trial) {
        const double v = wrap_coord(span(rng), 3.5);
        REQUIRE(v >= 0.0);
        REQUIRE(v < 3.5);
    }
    CHECK(wrap_coord(-1e-18, 1.0) < 1.0);
    CHECK(wrap_coord(1.0, 1.0) == 0.0);
}
