#pragma once

#include <stdexcept>

#include "nestsim/linalg.hpp"

namespace nestsim {

struct BlochVector {
    Vec3 r;
    bool valid_state(double tol = 1e-12) const { return r.norm() <= 1.0 + tol; }
};

/// Centre vector d and correlation matrix S of a canonical two-qubit state:
/// rho = (1/4)(I(x)I + d.sigma(x)I + sum_ij S_ij sigma_i(x)sigma_j).
struct CanonicalParams {
    Vec3 d;
    Mat3 s;
};

struct TwoQubitState {
    Mat4c rho;
    bool valid = false;  // PSD within the construction tolerance
};

struct SeparabilityVerdict {
    double det_pt = 0.0;  // det of the partial transpose
    bool separable = false;
    double tol = 0.0;
};

struct invalid_state_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Builds the 4x4 density matrix of a canonical state. Invalid quantum
/// "states" (not PSD) are representable; the valid flag records the outcome.
TwoQubitState assemble_canonical(const CanonicalParams& params, double tol = 1e-10);

struct PauliDecomposition {
    CanonicalParams params;
    Vec3 bob_bloch;
    bool canonical = false;  // |bob_bloch| <= 1e-10
};

/// Full product-Pauli expansion: d_i = tr(rho sigma_i(x)I),
/// bob_j = tr(rho I(x)sigma_j), S_ij = tr(rho sigma_i(x)sigma_j).
PauliDecomposition pauli_decompose(const TwoQubitState& state);

/// Transposes Bob's factor: each 2x2 block of rho is transposed in place.
TwoQubitState partial_transpose(const TwoQubitState& state);

/// det(rho^Gamma) >= 0 test. Requires a valid (PSD) state.
SeparabilityVerdict separability(const TwoQubitState& state, double tol = 1e-10);

}  // namespace nestsim
