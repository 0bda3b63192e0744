#pragma once

/**
 * @file kernels.hpp
 * Data-parallel inner loops. Every kernel exists twice: `serial::` is the
 * reference implementation kept for testing, `omp::` is the OpenMP version
 * used in production paths. Both partition work into fixed-size batches with
 * seeds derived from (seed, batch index), so their results are bit-identical
 * and independent of the thread count.
 */

#include "qjp/linalg.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

namespace qjp::kernels {

/// theta[axis . (beta_rho + m)] with theta[x >= 0] = 1; `always`/`never`
/// stand for the identity and the zero projector.
struct Indicator {
    enum class Kind { never, always, halfspace };
    Kind kind = Kind::halfspace;
    BlochVector axis;

    [[nodiscard]] bool operator()(const BlochVector &shifted) const {
        switch (kind) {
        case Kind::never: return false;
        case Kind::always: return true;
        case Kind::halfspace: return axis.dot(shifted) >= 0.0;
        }
        return false;
    }
};

struct HvTally {
    std::uint64_t samples = 0;
    std::uint64_t first = 0;  ///< hits of f
    std::uint64_t second = 0; ///< hits of g
    std::uint64_t both = 0;   ///< hits of f and g

    HvTally &operator+=(const HvTally &o) {
        samples += o.samples;
        first += o.first;
        second += o.second;
        both += o.both;
        return *this;
    }
    friend bool operator==(const HvTally &, const HvTally &) = default;
};

inline constexpr std::uint64_t hv_batch_size = 1u << 15;

/// Fibonacci lattice point `i` of `n` on the unit sphere.
BlochVector fibonacci_point(std::size_t i, std::size_t n);

struct GridMin {
    std::size_t index = 0;
    BlochVector point;
    double value = 0.0;
};

namespace serial {

/// Monte Carlo tally of f(m), g(m) over uniform m, in antithetic pairs
/// (m, -m). `n` counts evaluations; an odd n drops the last partner.
HvTally sample_hv(const BlochVector &rho, const Indicator &f, const Indicator &g,
                  std::uint64_t n, std::uint64_t seed);

/// Minimum of c0 + grad . b over n Fibonacci points; ties go to the lowest index.
GridMin sphere_grid_min(double c0, const BlochVector &grad, std::size_t n);

template <class Fn>
auto map_indexed(std::size_t n, Fn &&fn) -> std::vector<std::invoke_result_t<Fn &, std::size_t>> {
    std::vector<std::invoke_result_t<Fn &, std::size_t>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(fn(i));
    }
    return out;
}

} // namespace serial

namespace omp {

HvTally sample_hv(const BlochVector &rho, const Indicator &f, const Indicator &g,
                  std::uint64_t n, std::uint64_t seed);

GridMin sphere_grid_min(double c0, const BlochVector &grad, std::size_t n);

/// fn(i) for i in [0, n), evaluated in parallel, results in index order.
/// The first exception thrown by any iteration is rethrown after the loop.
template <class Fn>
auto map_indexed(std::size_t n, Fn &&fn) -> std::vector<std::invoke_result_t<Fn &, std::size_t>> {
    using T = std::invoke_result_t<Fn &, std::size_t>;
    std::vector<std::optional<T>> slots(n);
    std::exception_ptr failure;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            slots[static_cast<std::size_t>(i)].emplace(fn(static_cast<std::size_t>(i)));
        } catch (...) {
#pragma omp critical(qjp_map_indexed_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<T> out;
    out.reserve(n);
    for (auto &s : slots) {
        out.push_back(std::move(*s));
    }
    return out;
}

} // namespace omp

} // namespace qjp::kernels
