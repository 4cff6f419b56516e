#include <doctest.h>

#include <cmath>
#include <random>

#include "encal/errors.hpp"
#include "encal/piecewise.hpp"

using encal::PiecewiseFn;

TEST_CASE("construction validates breakpoints") {
    CHECK_THROWS_AS(PiecewiseFn({}, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseFn({{1.0, 0.0}}, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseFn({{0.0, 0.0}, {0.0, 1.0}}, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseFn({{0.0, 0.0}}, 0.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(PiecewiseFn({{0.0, 2.0}, {1.0, 3.0}}, 0.5, 0.1));
}

TEST_CASE("evaluation interpolates and extrapolates linearly") {
    PiecewiseFn f({{0.0, 1.0}, {2.0, 5.0}}, 0.5, 0.1);
    CHECK(f(0.0) == doctest::Approx(1.0));
    CHECK(f(1.0) == doctest::Approx(3.0));
    CHECK(f(2.0) == doctest::Approx(5.0));
    CHECK(f(4.0) == doctest::Approx(6.0));
    CHECK_THROWS_AS(f(-1.0), std::invalid_argument);
}

TEST_CASE("sampled families hit their closed forms on grid points") {
    double step = 0.01, horizon = 3.0;
    PiecewiseFn aff = PiecewiseFn::affine(2.0, 0.5, step, horizon);
    PiecewiseFn rl = PiecewiseFn::rate_latency(3.0, 1.0, step, horizon);
    PiecewiseFn ex = PiecewiseFn::exponential(2.0, 1.5, step, horizon);
    for (int k = 0; k <= 300; k += 17) {
        double t = k * step;
        CHECK(aff(t) == doctest::Approx(2.0 * t + 0.5));
        CHECK(rl(t) == doctest::Approx(3.0 * std::max(t - 1.0, 0.0)));
        CHECK(ex(t) == doctest::Approx(2.0 * std::exp(-1.5 * t)));
    }
    CHECK(aff(horizon + 2.0) == doctest::Approx(2.0 * (horizon + 2.0) + 0.5));
    CHECK(ex(horizon + 2.0) == doctest::Approx(ex(horizon)));  // flat tail
}

TEST_CASE("first_reach inverts non-decreasing functions exactly") {
    PiecewiseFn rl = PiecewiseFn::rate_latency(2.0, 0.5, 0.01, 4.0);
    CHECK(rl.first_reach(0.0) == doctest::Approx(0.0));
    CHECK(rl.first_reach(1.0) == doctest::Approx(1.0));   // 0.5 + 1/2
    CHECK(rl.first_reach(9.0) == doctest::Approx(5.0));   // beyond the horizon
    PiecewiseFn flat = PiecewiseFn::constant(1.0, 0.1);
    CHECK_THROWS_AS(flat.first_reach(2.0), encal::UnboundedDistance);
}

TEST_CASE("pointwise_min inserts the crossing exactly") {
    double step = 0.5;
    PiecewiseFn f = PiecewiseFn::affine(2.0, 0.0, step, 3.0);
    PiecewiseFn g = PiecewiseFn::affine(1.0, 1.0, step, 3.0);
    PiecewiseFn h = encal::pointwise_min(f, g);
    // 2t vs t+1 cross at t = 1
    bool has_crossing = false;
    for (const auto& p : h.points())
        if (p.t == doctest::Approx(1.0)) has_crossing = true;
    CHECK(has_crossing);
    CHECK(h(0.5) == doctest::Approx(1.0));
    CHECK(h(1.0) == doctest::Approx(2.0));
    CHECK(h(2.0) == doctest::Approx(3.0));
    CHECK(h.terminal_slope() == doctest::Approx(1.0));
}

TEST_CASE("pointwise_min finds crossings past the last breakpoint") {
    PiecewiseFn f({{0.0, 0.0}, {1.0, 1.0}}, 1.0, 0.1);   // t
    PiecewiseFn g({{0.0, 3.0}, {1.0, 3.0}}, 0.0, 0.1);   // constant 3
    PiecewiseFn h = encal::pointwise_min(f, g);
    CHECK(h(2.0) == doctest::Approx(2.0));
    CHECK(h(3.0) == doctest::Approx(3.0));
    CHECK(h(10.0) == doctest::Approx(3.0));
    CHECK(h.terminal_slope() == doctest::Approx(0.0));
}

TEST_CASE("min of equal functions is idempotent and zero absorbs") {
    PiecewiseFn f = PiecewiseFn::affine(1.5, 0.3, 0.1, 2.0);
    PiecewiseFn h = encal::pointwise_min(f, f);
    for (const auto& p : f.points()) CHECK(h(p.t) == doctest::Approx(p.v));
    PiecewiseFn z = PiecewiseFn::zero(0.1);
    PiecewiseFn hz = encal::pointwise_min(f, z);
    for (double t : {0.0, 0.7, 1.9, 5.0}) CHECK(hz(t) == doctest::Approx(0.0));
}

TEST_CASE("add merges breakpoints and sums slopes") {
    PiecewiseFn f({{0.0, 0.0}, {1.0, 2.0}}, 2.0, 0.1);
    PiecewiseFn g({{0.0, 1.0}, {2.0, 1.0}}, 0.5, 0.1);
    PiecewiseFn s = encal::add(f, g);
    CHECK(s(0.0) == doctest::Approx(1.0));
    CHECK(s(1.0) == doctest::Approx(3.0));
    CHECK(s(2.0) == doctest::Approx(5.0));
    CHECK(s.terminal_slope() == doctest::Approx(2.5));
}

TEST_CASE("random pointwise extrema agree with direct evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<PiecewiseFn::Point> pf{{0.0, u(rng)}}, pg{{0.0, u(rng)}};
        double t = 0.0;
        for (int i = 0; i < 6; ++i) {
            t += 0.1 + u(rng);
            pf.push_back({t, u(rng) * 4.0});
        }
        t = 0.0;
        for (int i = 0; i < 5; ++i) {
            t += 0.1 + u(rng);
            pg.push_back({t, u(rng) * 4.0});
        }
        PiecewiseFn f(pf, u(rng), 0.05), g(pg, u(rng), 0.05);
        PiecewiseFn mn = encal::pointwise_min(f, g);
        PiecewiseFn mx = encal::pointwise_max(f, g);
        for (double probe = 0.0; probe < 8.0; probe += 0.37) {
            CHECK(mn(probe) == doctest::Approx(std::min(f(probe), g(probe))).epsilon(1e-9));
            CHECK(mx(probe) == doctest::Approx(std::max(f(probe), g(probe))).epsilon(1e-9));
        }
    }
}

TEST_CASE("clamp helpers bound values with exact kinks") {
    PiecewiseFn f({{0.0, 2.0}, {1.0, -1.0}, {2.0, 0.5}}, 0.0, 0.1);
    PiecewiseFn lo = encal::clamp_below(f, 0.0);
    PiecewiseFn hi = encal::clamp_above(f, 1.0);
    for (double t : {0.0, 0.3, 0.8, 1.0, 1.5, 2.0, 3.0}) {
        CHECK(lo(t) == doctest::Approx(std::max(f(t), 0.0)));
        CHECK(hi(t) == doctest::Approx(std::min(f(t), 1.0)));
    }
}

TEST_CASE("shifted and complemented transforms") {
    PiecewiseFn f = PiecewiseFn::exponential(1.0, 2.0, 0.01, 3.0);
    PiecewiseFn up = f.shifted(0.5);
    PiecewiseFn comp = f.complemented(1.0);
    CHECK(up(1.0) == doctest::Approx(f(1.0) + 0.5));
    CHECK(comp(1.0) == doctest::Approx(1.0 - f(1.0)));
    CHECK(comp(0.0) == doctest::Approx(0.0));
}
