#include "nestsim/two_qubit.hpp"

#include <cstdio>

namespace nestsim {

TwoQubitState assemble_canonical(const CanonicalParams& params, double tol) {
    if (!params.d.finite() || !params.s.finite())
        throw std::invalid_argument("assemble_canonical: non-finite parameters");

    Mat4c rho = kron(Mat2c::identity(), Mat2c::identity());
    for (std::size_t i = 0; i < 3; ++i) {
        const Mat2c si = Mat2c::pauli(i + 1);
        rho = rho + kron(si, Mat2c::identity()) * cplx(params.d[i]);
        for (std::size_t j = 0; j < 3; ++j)
            rho = rho + kron(si, Mat2c::pauli(j + 1)) * cplx(params.s(i, j));
    }
    rho = rho * cplx(0.25);

    TwoQubitState state;
    state.rho = rho;
    state.valid = is_psd(rho, tol);
    return state;
}

PauliDecomposition pauli_decompose(const TwoQubitState& state) {
    const Mat4c& rho = state.rho;
    if (!rho.hermitian(1e-10 * std::max(1.0, rho.max_abs())))
        throw std::invalid_argument("pauli_decompose: rho is not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > 1e-10)
        throw std::invalid_argument("pauli_decompose: rho is not unit trace");

    auto coeff = [&](std::size_t i, std::size_t j) {
        return (rho * kron(Mat2c::pauli(i), Mat2c::pauli(j))).trace().real();
    };

    PauliDecomposition out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.params.d[i] = coeff(i + 1, 0);
        out.bob_bloch[i] = coeff(0, i + 1);
        for (std::size_t j = 0; j < 3; ++j) out.params.s(i, j) = coeff(i + 1, j + 1);
    }
    out.canonical = out.bob_bloch.norm() <= 1e-10;
    return out;
}

TwoQubitState partial_transpose(const TwoQubitState& state) {
    TwoQubitState out = state;
    // rho^Gamma[2a+i][2b+j] = rho[2a+j][2b+i]: transpose each 2x2 block.
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    out.rho(2 * a + i, 2 * b + j) = state.rho(2 * a + j, 2 * b + i);
    return out;
}

SeparabilityVerdict separability(const TwoQubitState& state, double tol) {
    if (!is_psd(state.rho, tol))
        throw invalid_state_error("separability: rho is not positive semi-definite");

    const cplx det = det4(partial_transpose(state).rho);
    const double imag = std::abs(det.imag());
    if (imag > 1e-10)
        throw std::invalid_argument(
            "separability: det(rho^Gamma) has a non-real component beyond tolerance");
    if (imag > 1e-12)
        std::fprintf(stderr,
                     "warning: discarding imaginary residue %.3e in det(rho^Gamma)\n",
                     imag);

    SeparabilityVerdict v;
    v.det_pt = det.real();
    v.tol = tol;
    v.separable = v.det_pt >= -tol;
    return v;
}

}  // namespace nestsim
