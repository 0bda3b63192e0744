#include "oracles.hpp"

#include "qjp/error.hpp"
#include "qjp/lattice.hpp"
#include "qjp/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qjp;

namespace {

Projector diag_projector(std::initializer_list<double> d) {
    const std::vector<double> v(d);
    return Projector(Matrix::diagonal(v));
}

std::size_t random_rank(std::size_t d, Rng &rng) {
    return std::uniform_int_distribution<std::size_t>(0, d)(rng);
}

} // namespace

TEST_CASE("negate") {
    CHECK(negate(Projector::identity(3)).rank() == 0);
    CHECK(max_abs_diff(negate(diag_projector({1, 0})), diag_projector({0, 1})) == 0.0);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const std::size_t d = 2 + i % 4;
        const Projector p = sample_projector(d, 1 + i % (d - 1), rng);
        const Projector n = negate(p);
        REQUIRE(n.rank() == d - p.rank());
        REQUIRE(max_abs_diff(n.matrix() * n.matrix(), n) < 1e-10);
        REQUIRE(max_abs_diff(negate(n), p) < 1e-15);
    }
}

TEST_CASE("meet on fixed inputs") {
    Rng rng(10);
    const Projector p = sample_projector(3, 2, rng);
    for (auto method : {MeetMethod::spectral, MeetMethod::iterated}) {
        CAPTURE(static_cast<int>(method));
        CHECK(max_abs_diff(meet(p, p, method), p) < 1e-10);

        const Projector a = qjp::Projector(bloch_to_matrix({0, 0, 1}));
        const Projector b = qjp::Projector(bloch_to_matrix({1, 0, 0}));
        CHECK(meet(a, b, method).rank() == 0);
        CHECK(meet(a, b, method).matrix().max_abs() < 1e-10);

        const Projector e12 = diag_projector({1, 1, 0});
        const Projector e13 = diag_projector({1, 0, 1});
        CHECK(max_abs_diff(meet(e12, e13, method), diag_projector({1, 0, 0})) < 1e-10);
    }
}

TEST_CASE("meet agrees with the nullspace oracle") {
    for (std::size_t d = 2; d <= 5; ++d) {
        for (std::uint64_t s = 0; s < 400; ++s) {
            Rng rng = make_rng(30 + d, s);
            // Force a shared subspace: both ranges contain a common random frame.
            const std::size_t shared = std::uniform_int_distribution<std::size_t>(0, d / 2)(rng);
            const auto frame = sample_frame(d, d, rng);
            std::vector<std::vector<cplx>> pa(frame.begin(), frame.begin() + shared);
            std::vector<std::vector<cplx>> qa = pa;
            // Extra directions mixed from the remaining frame vectors so the
            // ranges are otherwise in general position.
            const std::size_t rest = d - shared;
            const std::size_t extra_p = rest > 1 ? std::uniform_int_distribution<std::size_t>(0, rest / 2)(rng) : 0;
            const std::size_t extra_q = rest > 1 ? std::uniform_int_distribution<std::size_t>(0, rest / 2)(rng) : 0;
            auto add_mixed = [&](std::vector<std::vector<cplx>> &basis, std::size_t count) {
                for (std::size_t k = 0; k < count; ++k) {
                    std::vector<cplx> v(d, 0.0);
                    for (std::size_t j = shared; j < d; ++j) {
                        const cplx c = complex_gaussian(rng);
                        for (std::size_t i = 0; i < d; ++i) {
                            v[i] += c * frame[j][i];
                        }
                    }
                    basis.push_back(v);
                }
                orthonormalize(basis);
            };
            add_mixed(pa, extra_p);
            add_mixed(qa, extra_q);
            const Projector p = Projector::onto(pa, d);
            const Projector q = Projector::onto(qa, d);
            const Matrix ref = oracle::intersection_projector(p, q);
            CAPTURE(d);
            CAPTURE(s);
            REQUIRE(max_abs_diff(meet(p, q, MeetMethod::spectral), ref) < 1e-8);
            REQUIRE(max_abs_diff(meet(p, q, MeetMethod::iterated), ref) < 1e-8);
        }
    }
}

TEST_CASE("join") {
    Rng rng(12);
    const Projector p = sample_projector(4, 2, rng);
    CHECK(max_abs_diff(join(p, p), p) < 1e-10);
    const Projector a = Projector(bloch_to_matrix({0, 0, 1}));
    const Projector b = Projector(bloch_to_matrix({0, 1, 0}));
    CHECK(max_abs_diff(join(a, b), Matrix::identity(2)) < 1e-10);
    const Projector z = Projector::zero(3);
    CHECK(join(z, z).rank() == 0);
}

TEST_CASE("commuting pairs: meet = PQ, join = P + Q - PQ") {
    for (std::size_t d = 2; d <= 5; ++d) {
        for (std::uint64_t s = 0; s < 300; ++s) {
            Rng rng = make_rng(50 + d, s);
            const std::size_t rp = random_rank(d, rng);
            const std::size_t rq = random_rank(d, rng);
            const auto [p, q] = sample_commuting_pair(d, rp, rq, rng);
            const Matrix pq = p.matrix() * q.matrix();
            REQUIRE(max_abs_diff(meet(p, q, MeetMethod::spectral), pq) < 1e-10);
            REQUIRE(max_abs_diff(meet(p, q, MeetMethod::iterated), pq) < 1e-10);
            REQUIRE(max_abs_diff(join(p, q), p.matrix() + q.matrix() - pq) < 1e-10);
        }
    }
}

TEST_CASE("Loewner bounds and rank relations on random pairs") {
    for (std::size_t d = 2; d <= 4; ++d) {
        for (std::uint64_t s = 0; s < 1000; ++s) {
            Rng rng = make_rng(70 + d, s);
            const Projector p = sample_projector(d, random_rank(d, rng), rng);
            const Projector q = sample_projector(d, random_rank(d, rng), rng);
            const Projector m = meet(p, q);
            const Projector j = join(p, q);
            REQUIRE(loewner_leq(m, p));
            REQUIRE(loewner_leq(m, q));
            REQUIRE(loewner_leq(p, j));
            REQUIRE(loewner_leq(q, j));
            REQUIRE(j.rank() >= std::max(p.rank(), q.rank()));
            // dim(S_P + S_Q) = rank P + rank Q - dim(S_P and S_Q)
            REQUIRE(j.rank() == p.rank() + q.rank() - m.rank());
            REQUIRE(max_abs_diff(meet(p, q, MeetMethod::spectral), meet(p, q, MeetMethod::iterated)) <
                    1e-8);
        }
    }
}

TEST_CASE("nested pairs: P >= P' implies PP' = P'P = P'") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        Rng rng = make_rng(90, s);
        const std::size_t d = 2 + s % 4;
        const std::size_t outer_rank = 1 + s % d;
        const std::size_t inner_rank = std::uniform_int_distribution<std::size_t>(0, outer_rank)(rng);
        const auto [big, small] = sample_nested_pair(d, outer_rank, inner_rank, rng);
        REQUIRE(loewner_leq(small, big));
        REQUIRE(max_abs_diff(big.matrix() * small.matrix(), small) < 1e-10);
        REQUIRE(max_abs_diff(small.matrix() * big.matrix(), small) < 1e-10);
        REQUIRE(max_abs_diff(meet(big, small), small) < 1e-10);
        REQUIRE(max_abs_diff(join(big, small), big) < 1e-10);
    }
}

TEST_CASE("loewner_defect") {
    CHECK(loewner_defect(diag_projector({1, 0}), Projector::identity(2)) == 0.0);
    CHECK(loewner_defect(Projector::identity(2), diag_projector({1, 0})) ==
          doctest::Approx(1.0));
}

TEST_CASE("principal angles and near-degenerate flag") {
    const double theta = 0.3;
    const Projector a = Projector(bloch_to_matrix({0, 0, 1}));
    const Projector b = Projector(bloch_to_matrix({std::sin(2 * theta), 0, std::cos(2 * theta)}));
    const auto angles = principal_angles(a, b);
    REQUIRE(angles.size() == 1);
    CHECK(std::abs(angles[0] - theta) < 1e-12);
    CHECK_FALSE(near_degenerate(a, b));

    const double tiny = 1e-7;
    const Projector c = Projector(bloch_to_matrix({std::sin(2 * tiny), 0, std::cos(2 * tiny)}));
    CHECK(near_degenerate(a, c));
    CHECK_FALSE(near_degenerate(a, a));
}

TEST_CASE("iterated meet reports non-convergence") {
    // A tiny angle makes (PQ)^n converge too slowly for a 2-squaring cap.
    const Projector a = Projector(bloch_to_matrix({0, 0, 1}));
    const Projector b = Projector(bloch_to_matrix({std::sin(1e-3), 0, std::cos(1e-3)}));
    LatticeOptions opts;
    opts.max_squarings = 2;
    CHECK_THROWS_AS(meet(a, b, MeetMethod::iterated, opts), Error);
}
