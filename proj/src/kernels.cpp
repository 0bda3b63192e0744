#include "qjp/kernels.hpp"

#include "qjp/error.hpp"
#include "qjp/random.hpp"

#include <cmath>
#include <numbers>

namespace qjp::kernels {

namespace {

std::uint64_t batch_count(std::uint64_t n) { return (n + hv_batch_size - 1) / hv_batch_size; }

HvTally run_batch(const BlochVector &rho, const Indicator &f, const Indicator &g,
                  std::uint64_t n, std::uint64_t seed, std::uint64_t batch) {
    const std::uint64_t begin = batch * hv_batch_size;
    const std::uint64_t len = std::min(hv_batch_size, n - begin);
    Rng rng = make_rng(seed, batch);
    HvTally t;
    auto visit = [&](const BlochVector &m) {
        const BlochVector shifted = rho + m;
        const bool a = f(shifted);
        const bool b = g(shifted);
        t.samples += 1;
        t.first += a;
        t.second += b;
        t.both += (a && b);
    };
    for (std::uint64_t k = 0; k < len; k += 2) {
        const BlochVector m = sample_unit_vector(rng);
        visit(m);
        if (k + 1 < len) {
            visit(-m);
        }
    }
    return t;
}

double affine(double c0, const BlochVector &grad, const BlochVector &b) {
    return c0 + grad.dot(b);
}

void require_points(std::size_t n) {
    if (n == 0) {
        throw Error(Errc::InvalidConfig, "sphere grid needs at least one point");
    }
}

} // namespace

BlochVector fibonacci_point(std::size_t i, std::size_t n) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    return {r * std::cos(phi), r * std::sin(phi), z};
}

namespace serial {

HvTally sample_hv(const BlochVector &rho, const Indicator &f, const Indicator &g,
                  std::uint64_t n, std::uint64_t seed) {
    HvTally total;
    for (std::uint64_t b = 0; b < batch_count(n); ++b) {
        total += run_batch(rho, f, g, n, seed, b);
    }
    return total;
}

GridMin sphere_grid_min(double c0, const BlochVector &grad, std::size_t n) {
    require_points(n);
    GridMin best{0, fibonacci_point(0, n), affine(c0, grad, fibonacci_point(0, n))};
    for (std::size_t i = 1; i < n; ++i) {
        const BlochVector b = fibonacci_point(i, n);
        const double v = affine(c0, grad, b);
        if (v < best.value) {
            best = {i, b, v};
        }
    }
    return best;
}

} // namespace serial

namespace omp {

HvTally sample_hv(const BlochVector &rho, const Indicator &f, const Indicator &g,
                  std::uint64_t n, std::uint64_t seed) {
    const auto batches = static_cast<std::int64_t>(batch_count(n));
    std::vector<HvTally> partial(static_cast<std::size_t>(batches));
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < batches; ++b) {
        partial[static_cast<std::size_t>(b)] =
            run_batch(rho, f, g, n, seed, static_cast<std::uint64_t>(b));
    }
    HvTally total;
    for (const auto &t : partial) {
        total += t;
    }
    return total;
}

GridMin sphere_grid_min(double c0, const BlochVector &grad, std::size_t n) {
    require_points(n);
    GridMin best{0, fibonacci_point(0, n), affine(c0, grad, fibonacci_point(0, n))};
#pragma omp parallel
    {
        GridMin local = best;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 1; i < static_cast<std::int64_t>(n); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            const BlochVector b = fibonacci_point(idx, n);
            const double v = affine(c0, grad, b);
            if (v < local.value) {
                local = {idx, b, v};
            }
        }
#pragma omp critical(qjp_grid_min)
        if (local.value < best.value || (local.value == best.value && local.index < best.index)) {
            best = local;
        }
    }
    return best;
}

} // namespace omp

} // namespace qjp::kernels
