#include "iontele/ops.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace iontele;

namespace {
constexpr double kPi = std::numbers::pi;

bool close(Cx lhs, Cx rhs, double tol = 1e-12) { return std::abs(lhs - rhs) <= tol; }
}

TEST_CASE("hadamard") {
    const Operator h = ops::hadamard(1);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(close(h.matrix()(0, 0), s));
    CHECK(close(h.matrix()(1, 0), s));   // |e> -> (|e> + |g>)/sqrt2
    CHECK(close(h.matrix()(0, 1), s));
    CHECK(close(h.matrix()(1, 1), -s));

    const CMatrix sq = h.matrix() * h.matrix();
    CHECK(close(sq(0, 0), 1.0));
    CHECK(close(sq(0, 1), 0.0));
    CHECK(close(sq(1, 1), 1.0));
}

TEST_CASE("cnot is the g-controlled permutation") {
    const Operator cx = ops::cnot(1, 3);
    const CMatrix& m = cx.matrix();
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK((m(r, c) == Cx{} || m(r, c) == Cx{1.0}));
    // control |e>: target unchanged; control |g>: target flipped
    CHECK(m(0, 0) == Cx{1.0});
    CHECK(m(1, 1) == Cx{1.0});
    CHECK(m(3, 2) == Cx{1.0});
    CHECK(m(2, 3) == Cx{1.0});

    const CMatrix sq = m * m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(close(sq(r, c), r == c ? Cx{1.0} : Cx{}));
}

TEST_CASE("sideband pulse: zero area is the identity") {
    const Operator u = ops::sideband_unitary({0.0, 0.3, 4}, 6);
    for (std::size_t r = 0; r < u.dim(); ++r)
        for (std::size_t c = 0; c < u.dim(); ++c)
            CHECK(close(u.matrix()(r, c), r == c ? Cx{1.0} : Cx{}));
}

TEST_CASE("sideband pulse: ground state with empty mode is stationary") {
    RandomStream rng({42, 0});
    for (int trial = 0; trial < 10; ++trial) {
        const double gt = 2.0 * kPi * rng.uniform();
        const double phi = 2.0 * kPi * rng.uniform();
        const Operator u = ops::sideband_unitary({gt, phi, 3}, 6);
        const std::size_t g0 = 3;  // |g,0> at index mode_dim + 0
        for (std::size_t r = 0; r < u.dim(); ++r)
            CHECK(close(u.matrix()(r, g0), r == g0 ? Cx{1.0} : Cx{}));
    }
}

TEST_CASE("sideband pulse: quarter flop swaps the excitation into the mode") {
    // gt = pi/2, phi = 0: |e,0> -> -i |g,1>
    const Operator u = ops::sideband_unitary({kPi / 2.0, 0.0, 4}, 6);
    const std::size_t e0 = 0;
    const std::size_t g1 = 4 + 1;
    CHECK(std::abs(u.matrix()(e0, e0)) < 1e-12);
    CHECK(close(u.matrix()(g1, e0), Cx(0.0, -1.0)));
}

TEST_CASE("sideband pulse: |g,1> column follows the propagator") {
    const double gt = 0.83;
    const double phi = 1.7;
    const Operator u = ops::sideband_unitary({gt, phi, 4}, 6);
    const std::size_t g1 = 4 + 1;
    const std::size_t e0 = 0;
    CHECK(close(u.matrix()(g1, g1), Cx{std::cos(gt)}));
    CHECK(close(u.matrix()(e0, g1), Cx(0.0, -1.0) * std::polar(1.0, -phi) * std::sin(gt)));
}

TEST_CASE("sideband pulse: unitary and excitation-preserving for random areas") {
    RandomStream rng({77, 0});
    for (const int mode_dim : {2, 3, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            const double gt = 2.0 * kPi * rng.uniform();
            const double phi = 2.0 * kPi * rng.uniform();
            const Operator u = ops::sideband_unitary({gt, phi, mode_dim}, 4);
            CHECK(unitarity_defect(u.matrix()) <= 1e-12);

            // excitation = (qubit excited ? 1 : 0) + phonon number
            const auto excitation = [&](std::size_t idx) {
                const std::size_t q = idx / static_cast<std::size_t>(mode_dim);
                const std::size_t n = idx % static_cast<std::size_t>(mode_dim);
                return (q == 0 ? 1 : 0) + static_cast<int>(n);
            };
            for (std::size_t r = 0; r < u.dim(); ++r)
                for (std::size_t c = 0; c < u.dim(); ++c)
                    if (std::abs(u.matrix()(r, c)) > 1e-15)
                        CHECK(excitation(r) == excitation(c));
        }
    }
}

TEST_CASE("sideband pulse rejects bad configs") {
    CHECK_THROWS_AS(ops::sideband_unitary({-0.1, 0.0, 4}, 6), std::invalid_argument);
    CHECK_THROWS_AS(ops::sideband_unitary({std::nan(""), 0.0, 4}, 6), std::invalid_argument);
    CHECK_THROWS_AS(ops::sideband_unitary({1.0, 0.0, 1}, 6), std::invalid_argument);
}

TEST_CASE("collective phase") {
    const Operator id_like = ops::collective_phase(0.0, 0.0, 4, 6);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(close(id_like.matrix()(r, c), r == c ? Cx{1.0} : Cx{}));

    const double phi1 = 0.9;
    const double phi2 = -2.2;
    const Operator u = ops::collective_phase(phi1, phi2, 4, 6);
    const CMatrix& m = u.matrix();
    CHECK(close(m(1, 1), std::polar(1.0, -phi1)));  // |eg>
    CHECK(close(m(2, 2), std::polar(1.0, -phi2)));  // |ge>
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            if (r != c) CHECK(m(r, c) == Cx{});
    // entry(gg) = entry(eg) * entry(ge), given entry(ee) = 1
    CHECK(close(m(3, 3), m(1, 1) * m(2, 2)));
    CHECK(unitarity_defect(m) <= 1e-12);
}

TEST_CASE("pauli gates") {
    const Operator op_x = ops::pauli_x(4);
    const Operator op_z = ops::pauli_z(4);
    const CMatrix& x = op_x.matrix();
    const CMatrix& z = op_z.matrix();
    CHECK(x(1, 0) == Cx{1.0});  // X|e> = |g>
    CHECK(x(0, 1) == Cx{1.0});
    CHECK(z(0, 0) == Cx{1.0});
    CHECK(z(1, 1) == Cx{-1.0});  // Z|g> = -|g>

    for (const CMatrix* m : {&x, &z}) {
        const CMatrix sq = *m * *m;
        CHECK(close(sq(0, 0), 1.0));
        CHECK(close(sq(1, 1), 1.0));
        CHECK(close(sq(0, 1), 0.0));
        CHECK(close(sq(1, 0), 0.0));
    }
}
