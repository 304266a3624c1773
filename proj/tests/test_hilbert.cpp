#include "iontele/hilbert.hpp"
#include "iontele/ops.hpp"

#include "helpers.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace iontele;
using testutil::max_amp_diff;

TEST_CASE("layout construction and indexing") {
    const RegisterLayout layout({1, 2, 3, 4, 5, 6}, 4);
    CHECK(layout.dim() == 256);
    CHECK(layout.num_qubits() == 6);
    CHECK(layout.qubit_position(1) == 0);
    CHECK(layout.qubit_position(6) == 5);
    CHECK_THROWS_AS(layout.qubit_position(7), UnknownRegister);

    const int all_e[6] = {0, 0, 0, 0, 0, 0};
    CHECK(layout.basis_index(all_e, 0) == 0);
    const int ion6_g[6] = {0, 0, 0, 0, 0, 1};
    CHECK(layout.basis_index(ion6_g, 0) == 4);  // ion-6 bit times mode_dim
    CHECK_THROWS_AS(layout.basis_index(all_e, 4), IndexOutOfRange);

    CHECK_THROWS_AS(RegisterLayout({1, 1, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(RegisterLayout({1, 2}, 1), std::invalid_argument);
}

TEST_CASE("new_basis_state places a single unit amplitude") {
    const RegisterLayout layout({1, 2, 3, 4, 5, 6}, 4);
    std::map<int, int> all_e{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}};

    const StateVector zero = new_basis_state(layout, all_e, 0);
    CHECK(zero.amp(0) == Cx{1.0});
    CHECK(zero.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

    auto ion6_g = all_e;
    ion6_g[6] = 1;
    const StateVector flipped = new_basis_state(layout, ion6_g, 0);
    CHECK(flipped.amp(4) == Cx{1.0});
    CHECK(flipped.amp(0) == Cx{});

    CHECK_THROWS_AS(new_basis_state(layout, all_e, 4), IndexOutOfRange);
    auto bad_level = all_e;
    bad_level[1] = 2;
    CHECK_THROWS_AS(new_basis_state(layout, bad_level, 0), IndexOutOfRange);
    auto alien = all_e;
    alien[9] = 0;
    CHECK_THROWS_AS(new_basis_state(layout, alien, 0), UnknownRegister);
    auto missing = all_e;
    missing.erase(3);
    CHECK_THROWS_AS(new_basis_state(layout, missing, 0), UnknownRegister);
}

TEST_CASE("apply_local identity and single-qubit flip") {
    const RegisterLayout layout({1, 2, 3}, 3);
    RandomStream rng({11, 0});
    const StateVector psi = testutil::random_state(layout, rng);

    const Operator id = Operator::unitary({Reg::qubit(2)}, CMatrix::identity(2));
    CHECK(max_amp_diff(apply_local(id, psi), psi) == 0.0);

    const std::map<int, int> all_e{{1, 0}, {2, 0}, {3, 0}};
    std::map<int, int> one_g{{1, 1}, {2, 0}, {3, 0}};
    const StateVector before = new_basis_state(layout, all_e, 0);
    const StateVector after = apply_local(ops::pauli_x(1), before);
    CHECK(max_amp_diff(after, new_basis_state(layout, one_g, 0)) == 0.0);
}

TEST_CASE("apply_local error paths") {
    const RegisterLayout layout({1, 2}, 2);
    RandomStream rng({12, 0});
    const StateVector psi = testutil::random_state(layout, rng);

    CHECK_THROWS_AS(apply_local(ops::hadamard(9), psi), UnknownRegister);
    const Operator wrong_dim = Operator::unitary({Reg::qubit(1), Reg::mode()},
                                                 CMatrix::identity(2));
    CHECK_THROWS_AS(apply_local(wrong_dim, psi), DimensionMismatch);
    CHECK_THROWS_AS(Operator::unitary({Reg::qubit(1), Reg::qubit(1)}, CMatrix::identity(4)),
                    DimensionMismatch);
}

TEST_CASE("apply_local agrees with the dense embedded-matrix reference") {
    RandomStream rng({2024, 0});
    const RegisterLayout layout({2, 5, 7, 9}, 2);
    const StateVector psi = testutil::random_state(layout, rng);
    const Operator u =
        Operator::unitary({Reg::qubit(2), Reg::qubit(5)}, testutil::random_unitary(4, rng));
    CHECK(max_amp_diff(apply_local(u, psi), oracle::apply_dense(u, psi)) < 1e-12);
}

TEST_CASE("apply_local vs dense reference across random layouts and targets") {
    RandomStream rng({7, 0});
    for (int trial = 0; trial < 60; ++trial) {
        const int n_qubits = 1 + static_cast<int>(rng.uniform() * 6);
        const int mode_dim = 2 + static_cast<int>(rng.uniform() * 3);
        std::vector<int> labels;
        for (int q = 0; q < n_qubits; ++q) labels.push_back(q + 1);
        const RegisterLayout layout(labels, mode_dim);
        const StateVector psi = testutil::random_state(layout, rng);

        std::vector<Reg> targets;
        const bool with_mode = rng.uniform() < 0.5;
        const int n_targets = 1 + static_cast<int>(rng.uniform() * std::min(n_qubits, 2));
        std::size_t dim = 1;
        for (int t = 0; t < n_targets; ++t) {
            int label = 0;
            do {
                label = 1 + static_cast<int>(rng.uniform() * n_qubits);
            } while (std::find_if(targets.begin(), targets.end(), [&](Reg r) {
                         return r.kind == Reg::Kind::qubit && r.label == label;
                     }) != targets.end());
            targets.push_back(Reg::qubit(label));
            dim *= 2;
        }
        if (with_mode) {
            targets.push_back(Reg::mode());
            dim *= static_cast<std::size_t>(mode_dim);
        }
        const Operator u = Operator::unitary(targets, testutil::random_unitary(dim, rng));

        const StateVector fast = apply_local(u, psi);
        const StateVector slow = oracle::apply_dense(u, psi);
        CAPTURE(trial);
        CHECK(max_amp_diff(fast, slow) < 1e-12);
        CHECK(std::abs(fast.norm_sq() - 1.0) < 1e-12);
    }
}

TEST_CASE("composing unitaries on shared targets matches the product matrix") {
    RandomStream rng({31, 0});
    const RegisterLayout layout({1, 2, 3}, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = testutil::random_state(layout, rng);
        const std::vector<Reg> targets{Reg::qubit(3), Reg::mode()};
        const CMatrix mu = testutil::random_unitary(8, rng);
        const CMatrix mv = testutil::random_unitary(8, rng);
        const Operator u = Operator::unitary(targets, mu);
        const Operator v = Operator::unitary(targets, mv);
        const Operator uv = Operator::unitary(targets, mu * mv);
        CHECK(max_amp_diff(apply_local(u, apply_local(v, psi)), apply_local(uv, psi)) < 1e-12);
    }
}

TEST_CASE("inner product contracts") {
    const RegisterLayout layout({1, 2}, 3);
    RandomStream rng({5, 0});
    const StateVector x = testutil::random_state(layout, rng);
    const StateVector y = testutil::random_state(layout, rng);

    CHECK(std::abs(inner(x, x) - Cx{x.norm_sq()}) < 1e-12);
    CHECK(std::abs(inner(x, y) - std::conj(inner(y, x))) < 1e-14);

    const std::map<int, int> ee{{1, 0}, {2, 0}};
    std::map<int, int> eg{{1, 0}, {2, 1}};
    CHECK(inner(new_basis_state(layout, ee, 0), new_basis_state(layout, eg, 0)) == Cx{});

    const RegisterLayout other({1, 2}, 4);
    CHECK_THROWS_AS(inner(x, testutil::random_state(other, rng)), LayoutMismatch);
}

TEST_CASE("fidelity_mod_phase") {
    const RegisterLayout layout({1, 2}, 2);
    RandomStream rng({6, 0});
    const StateVector x = testutil::random_state(layout, rng);
    const StateVector y = testutil::random_state(layout, rng);

    CHECK(fidelity_mod_phase(x, x) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<Cx> rotated(x.amps().begin(), x.amps().end());
    for (Cx& z : rotated) z *= std::polar(1.0, 1.234);
    const StateVector xr(layout, std::move(rotated));
    CHECK(std::abs(fidelity_mod_phase(x, xr) - 1.0) < 1e-12);

    const std::map<int, int> ee{{1, 0}, {2, 0}};
    std::map<int, int> gg{{1, 1}, {2, 1}};
    CHECK(fidelity_mod_phase(new_basis_state(layout, ee, 0),
                             new_basis_state(layout, gg, 0)) == 0.0);

    CHECK(std::abs(fidelity_mod_phase(x, y) - fidelity_mod_phase(y, x)) < 1e-14);

    std::vector<Cx> big(x.amps().begin(), x.amps().end());
    for (Cx& z : big) z *= 1.5;
    CHECK_THROWS_AS(fidelity_mod_phase(StateVector(layout, big), x), NotNormalized);
}

TEST_CASE("unitary operators preserve the norm") {
    RandomStream rng({99, 0});
    const RegisterLayout layout({1, 2, 3, 4}, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector psi = testutil::random_state(layout, rng);
        const Operator u = Operator::unitary({Reg::qubit(2), Reg::mode()},
                                             testutil::random_unitary(6, rng));
        const StateVector out = apply_local(u, psi);
        CHECK(std::abs(out.norm_sq() - psi.norm_sq()) <= 1e-12);
    }
}

TEST_CASE("operator constructors reject non-unitary matrices") {
    CMatrix skew(2);
    skew(0, 0) = 1.0;
    skew(1, 1) = 0.5;
    CHECK_THROWS_AS(Operator::unitary({Reg::qubit(1)}, skew), NotUnitary);
    CHECK_NOTHROW(Operator::general({Reg::qubit(1)}, skew));
}
