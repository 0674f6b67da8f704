#include <doctest.h>

#include "nestsim/two_qubit.hpp"
#include "test_helpers.hpp"

using namespace nestsim;
using namespace testutil;

namespace {

double max_diff(const Mat4c& a, const Mat4c& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("assemble_canonical of zero parameters is the maximally mixed state") {
    const TwoQubitState s = assemble_canonical({});
    CHECK(max_diff(s.rho, Mat4c::identity() * cplx(0.25)) <= 1e-15);
    CHECK(s.valid);
}

TEST_CASE("assemble_canonical recovers the reference separable state") {
    CanonicalParams p;
    p.s = Mat3::diag(0.5, 0.5, 0.0);
    const TwoQubitState s = assemble_canonical(p);
    CHECK(max_diff(s.rho, reference_rho1()) <= 1e-15);
    CHECK(s.valid);
    CHECK(std::abs(s.rho.trace() - cplx(1.0)) <= 1e-15);
}

TEST_CASE("assemble_canonical flags non-states instead of throwing") {
    CanonicalParams p;
    p.s = Mat3::diag(1.0, 1.0, 1.0);
    const TwoQubitState s = assemble_canonical(p);
    CHECK_FALSE(s.valid);
    // oracle: this matrix is SWAP/2 with minimum eigenvalue -1/2
    CHECK(eig_herm4(s.rho)[3] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("assemble_canonical reduced states") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const CanonicalParams p = random_valid_canonical(rng);
        const PauliDecomposition dec = pauli_decompose(assemble_canonical(p));
        CHECK(dec.canonical);
        CHECK(dec.bob_bloch.norm() <= 1e-12);
        CHECK((dec.params.d - p.d).norm() <= 1e-12);
    }
}

TEST_CASE("pauli_decompose round-trips assemble_canonical") {
    SplitMix64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        CanonicalParams p;
        p.d = rng.unit_vector() * rng.uniform();
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) p.s(i, j) = rng.uniform(-1, 1);
        const PauliDecomposition dec = pauli_decompose(assemble_canonical(p));
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(dec.params.d[i] - p.d[i]) <= 1e-13);
            for (std::size_t j = 0; j < 3; ++j)
                CHECK(std::abs(dec.params.s(i, j) - p.s(i, j)) <= 1e-13);
        }
    }
}

TEST_CASE("pauli_decompose of the maximally mixed state") {
    const PauliDecomposition dec =
        pauli_decompose({Mat4c::identity() * cplx(0.25), true});
    CHECK(dec.params.d.norm() <= 1e-15);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(dec.params.s(i, j)) <= 1e-15);
}

TEST_CASE("pauli_decompose of the reference entangled state") {
    const PauliDecomposition dec = pauli_decompose({reference_rho2(), true});
    CHECK(dec.canonical);
    CHECK(dec.params.s(0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dec.params.s(1, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dec.params.s(2, 2) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(std::abs(dec.params.s(0, 1)) <= 1e-13);
    CHECK(dec.params.d.norm() <= 1e-13);
}

TEST_CASE("partial_transpose matches the reference and is an involution") {
    const TwoQubitState rho1 = {reference_rho1(), true};
    CHECK(max_diff(partial_transpose(rho1).rho, reference_rho1_pt()) <= 1e-15);

    const Mat4c diag = Mat4c::identity() * cplx(0.25);
    CHECK(max_diff(partial_transpose({diag, true}).rho, diag) <= 1e-15);

    SplitMix64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const TwoQubitState s = assemble_canonical(random_valid_canonical(rng));
        const TwoQubitState pt = partial_transpose(s);
        CHECK(max_diff(partial_transpose(pt).rho, s.rho) == 0.0);
        CHECK(std::abs(pt.rho.trace() - s.rho.trace()) == 0.0);
        CHECK(pt.rho.hermitian(1e-15));
    }
}

TEST_CASE("separability classifies the reference states") {
    const SeparabilityVerdict v1 = separability({reference_rho1(), true});
    CHECK(std::abs(v1.det_pt) <= 1e-12);
    CHECK(v1.separable);

    const SeparabilityVerdict v2 = separability({reference_rho2(), true});
    CHECK(v2.det_pt == doctest::Approx(-1.0 / 16.0).epsilon(1e-12));
    CHECK_FALSE(v2.separable);

    const SeparabilityVerdict mixed =
        separability({Mat4c::identity() * cplx(0.25), true});
    CHECK(mixed.det_pt == doctest::Approx(1.0 / 256.0).epsilon(1e-13));
    CHECK(mixed.separable);
}

TEST_CASE("separability rejects non-states") {
    CanonicalParams p;
    p.s = Mat3::diag(1.0, 1.0, 1.0);
    CHECK_THROWS_AS(separability(assemble_canonical(p)), invalid_state_error);
}

TEST_CASE("det of the partial transpose is local-unitary invariant") {
    SplitMix64 rng(24);
    for (int trial = 0; trial < 40; ++trial) {
        const TwoQubitState s = assemble_canonical(random_valid_canonical(rng));
        const Mat4c uv = kron(random_su2(rng), random_su2(rng));
        const TwoQubitState conj = {uv * s.rho * uv.adjoint(), true};
        const double d0 = det4(partial_transpose(s).rho).real();
        const double d1 = det4(partial_transpose(conj).rho).real();
        CHECK(std::abs(d0 - d1) <= 1e-10);
    }
}
