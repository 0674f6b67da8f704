#include <doctest.h>

#include "nestsim/linalg.hpp"
#include "nestsim/rng.hpp"
#include "test_helpers.hpp"

using namespace nestsim;
using namespace testutil;

TEST_CASE("eig_sym3 on diagonal input") {
    const EigenSystem3 es = eig_sym3(SymMat3::diag(4.0, 1.0, 0.0));
    CHECK(es.values[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.values[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(es.vectors[0].x) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors[1].y) == doctest::Approx(1.0));
    CHECK(std::abs(es.vectors[2].z) == doctest::Approx(1.0));
}

TEST_CASE("eig_sym3 on the identity") {
    const EigenSystem3 es = eig_sym3(SymMat3::identity());
    for (double v : es.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    // any orthonormal basis is acceptable
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(es.vectors[i].dot(es.vectors[j]) ==
                  doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
}

TEST_CASE("eig_sym3 residual and orthogonality on random matrices") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const SymMat3 m = random_sym3(rng, 2.0);
        const EigenSystem3 es = eig_sym3(m);
        CHECK(es.values[0] >= es.values[1]);
        CHECK(es.values[1] >= es.values[2]);
        for (int k = 0; k < 3; ++k) {
            const Vec3 resid = m * es.vectors[k] - es.vectors[k] * es.values[k];
            CHECK(resid.norm() <= 1e-10 * std::max(1.0, std::abs(es.values[k])));
        }
        // eigenvalues match the characteristic-polynomial roots
        const auto roots = charpoly_eigs(m);
        for (int k = 0; k < 3; ++k)
            CHECK(es.values[k] == doctest::Approx(roots[k]).epsilon(1e-9));
    }
}

TEST_CASE("eig_sym3 eigenvalues are rotation invariant") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const SymMat3 m = random_sym3(rng, 1.5);
        const Mat3 r = random_rotation(rng);
        const SymMat3 conj = SymMat3::from_mat3(r * m.to_mat3() * r.transpose());
        const EigenSystem3 a = eig_sym3(m), b = eig_sym3(conj);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-9);
    }
}

TEST_CASE("eig_sym3 rejects non-finite input") {
    SymMat3 m;
    m.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(eig_sym3(m), std::invalid_argument);
}

TEST_CASE("det4 of the maximally mixed state") {
    const Mat4c m = Mat4c::identity() * cplx(0.25);
    CHECK(det4(m).real() == doctest::Approx(1.0 / 256.0).epsilon(1e-14));
    CHECK(std::abs(det4(m).imag()) <= 1e-15);
}

TEST_CASE("det4 of the reference partial transposes") {
    // rho2^Gamma value pre-computed by cofactor expansion: -1/16
    Mat4c rho2_pt;
    rho2_pt(0, 3) = rho2_pt(3, 0) = 0.5;
    rho2_pt(1, 1) = rho2_pt(2, 2) = 0.5;
    CHECK(det4(rho2_pt).real() == doctest::Approx(-1.0 / 16.0).epsilon(1e-14));
    CHECK(det4(reference_rho1_pt()).real() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("det4 of a rank-deficient matrix is zero") {
    Mat4c m;
    for (std::size_t j = 0; j < 4; ++j) {
        m(0, j) = cplx(1.0, double(j));
        m(1, j) = cplx(1.0, double(j));  // repeated row
        m(2, j) = double(j * j);
        m(3, j) = cplx(0.0, 1.0);
    }
    CHECK(std::abs(det4(m)) <= 1e-14);
}

TEST_CASE("det4 is multiplicative and agrees with LU") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Mat4c a, b;
        for (std::size_t i = 0; i < 16; ++i) {
            a.e[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            b.e[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
        const cplx dab = det4(a * b);
        const cplx prod = det4(a) * det4(b);
        CHECK(std::abs(dab - prod) <= 1e-10 * std::max(1.0, std::abs(prod)));
        CHECK(std::abs(det4(a) - lu_det4(a)) <= 1e-12 * std::max(1.0, std::abs(det4(a))));
    }
}

TEST_CASE("is_psd basics") {
    Mat4c diag1;
    diag1(0, 0) = 1.0;
    CHECK(is_psd(diag1, 1e-10));
    CHECK(is_psd(reference_rho1(), 1e-10));
    CHECK(is_psd(reference_rho2(), 1e-10));

    // qubit with |r| = 1.1 is outside the Bloch sphere
    const Mat2c over = (Mat2c::identity() + Mat2c::pauli_z() * cplx(1.1)) * cplx(0.5);
    CHECK_FALSE(is_psd(over, 1e-10));
    const Mat2c edge = (Mat2c::identity() + Mat2c::pauli_z()) * cplx(0.5);
    CHECK(is_psd(edge, 1e-10));
}

TEST_CASE("is_psd agrees with the characteristic-polynomial root sign") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 300; ++trial) {
        const SymMat3 m = random_sym3(rng, 1.0);
        const double min_root = charpoly_eigs(m)[2];
        if (std::abs(min_root) < 1e-8) continue;  // boundary band
        CHECK(is_psd(m, 1e-10) == (min_root > 0.0));
    }
}

TEST_CASE("is_psd rejects non-Hermitian input") {
    Mat2c m;
    m(0, 1) = cplx(1.0, 0.0);  // m(1,0) stays 0
    CHECK_THROWS_AS(is_psd(m, 1e-10), std::invalid_argument);
}

TEST_CASE("eig_herm4 matches hand-computable spectra") {
    // SWAP/2 has eigenvalues {1/2, 1/2, 1/2, -1/2}
    Mat4c swap_half;
    swap_half(0, 0) = swap_half(3, 3) = 0.5;
    swap_half(1, 2) = swap_half(2, 1) = 0.5;
    const auto ev = eig_herm4(swap_half);
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(-0.5).epsilon(1e-12));

    // trace and sum-of-eigenvalues agree on random Hermitian matrices
    SplitMix64 rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        Mat4c g;
        for (std::size_t i = 0; i < 16; ++i)
            g.e[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const Mat4c h = (g + g.adjoint()) * cplx(0.5);
        const auto w = eig_herm4(h);
        CHECK(w[0] + w[1] + w[2] + w[3] ==
              doctest::Approx(h.trace().real()).epsilon(1e-10));
        CHECK(std::abs(w[0] * w[1] * w[2] * w[3] - det4(h).real()) <= 1e-9);
    }
}
