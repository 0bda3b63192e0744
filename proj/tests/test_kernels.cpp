#include "qjp/error.hpp"
#include "qjp/kernels.hpp"
#include "qjp/random.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <stdexcept>

using namespace qjp;
using namespace qjp::kernels;

namespace {

// Pins the OpenMP team size for one scope so the parallel paths really fork
// even on a single-core runner.
struct ThreadCount {
    explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved); }
    int saved;
};

} // namespace

TEST_CASE("fibonacci lattice points are unit vectors") {
    for (std::size_t n : {1u, 2u, 17u, 1000u}) {
        for (std::size_t i = 0; i < n; ++i) {
            REQUIRE(std::abs(fibonacci_point(i, n).norm() - 1.0) < 1e-12);
        }
    }
    // the lattice is balanced: its centroid vanishes as n grows
    BlochVector c;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
        c = c + (1.0 / n) * fibonacci_point(i, n);
    }
    CHECK(c.norm() < 1e-3);
}

TEST_CASE("sample_hv: serial and parallel tallies are identical") {
    Rng rng(1);
    using Kind = Indicator::Kind;
    for (int threads : {1, 2, 4, 7}) {
        ThreadCount tc(threads);
        for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{32769},
                                std::uint64_t{200'000}}) {
            const BlochVector r = 0.7 * sample_unit_vector(rng);
            const Indicator f{Kind::halfspace, sample_unit_vector(rng)};
            const Indicator g{threads % 2 ? Kind::halfspace : Kind::always, sample_unit_vector(rng)};
            const HvTally a = serial::sample_hv(r, f, g, n, 99);
            const HvTally b = omp::sample_hv(r, f, g, n, 99);
            CAPTURE(threads);
            CAPTURE(n);
            REQUIRE(a == b);
            REQUIRE(a.samples == n);
            REQUIRE(a.both <= std::min(a.first, a.second));
        }
    }
}

TEST_CASE("sample_hv: antithetic pairs make the centred halfspace exact") {
    // For rho at the centre, m and -m land on opposite sides of any plane
    // through the origin, so every pair contributes exactly one hit.
    const Indicator f{Indicator::Kind::halfspace, {0, 0, 1}};
    const Indicator one{Indicator::Kind::always, {}};
    const HvTally t = omp::sample_hv({0, 0, 0}, f, one, 100'000, 3);
    CHECK(t.first == 50'000);
    CHECK(t.second == 100'000);
    const Indicator never{Indicator::Kind::never, {}};
    CHECK(omp::sample_hv({0, 0, 0}, f, never, 1000, 3).both == 0);
}

TEST_CASE("sample_hv is seed-deterministic and seed-sensitive") {
    const Indicator f{Indicator::Kind::halfspace, {1, 0, 0}};
    const Indicator g{Indicator::Kind::halfspace, {0, 1, 0}};
    const BlochVector r{0.1, 0.2, 0.3};
    CHECK(omp::sample_hv(r, f, g, 50'000, 5) == omp::sample_hv(r, f, g, 50'000, 5));
    CHECK_FALSE(omp::sample_hv(r, f, g, 50'000, 5) == omp::sample_hv(r, f, g, 50'000, 6));
}

TEST_CASE("sphere_grid_min: serial and parallel agree, ties resolve to lowest index") {
    Rng rng(2);
    for (int threads : {1, 3, 8}) {
        ThreadCount tc(threads);
        for (int k = 0; k < 20; ++k) {
            const BlochVector grad = sample_unit_vector(rng);
            const GridMin a = serial::sphere_grid_min(0.5, grad, 20'000);
            const GridMin b = omp::sphere_grid_min(0.5, grad, 20'000);
            REQUIRE(a.index == b.index);
            REQUIRE(a.value == b.value);
            REQUIRE(a.value < 0.5 - 0.999);
        }
        // constant function: every point ties
        const GridMin flat = omp::sphere_grid_min(1.0, {0, 0, 0}, 5000);
        CHECK(flat.index == 0);
        CHECK(flat.value == 1.0);
    }
    CHECK_THROWS_AS(omp::sphere_grid_min(0.0, {0, 0, 1}, 0), Error);
}

TEST_CASE("map_indexed preserves order and propagates exceptions") {
    ThreadCount tc(4);
    auto square = [](std::size_t i) { return static_cast<double>(i * i); };
    CHECK(serial::map_indexed(1000, square) == omp::map_indexed(1000, square));
    CHECK(omp::map_indexed(0, square).empty());
    auto failing = [](std::size_t i) -> int {
        if (i == 37) {
            throw std::runtime_error("boom");
        }
        return static_cast<int>(i);
    };
    CHECK_THROWS_AS(omp::map_indexed(100, failing), std::runtime_error);
}

TEST_CASE("derive_seed separates streams") {
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
    CHECK(derive_seed(1, 0) != derive_seed(0, 1));
    CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}
