#pragma once

#include <cstdint>
#include <vector>

#include "nestsim/two_qubit.hpp"

namespace nestsim {

/// Ellipsoid {c + A u : |u| <= 1} with A the principal square root of q.
/// q may be rank deficient (ellipse, line or point). The circumscribing
/// sphere radius lives with the query, not here.
struct Ellipsoid {
    SymMat3 q;
    Vec3 c;
};

/// A two-outcome measurement effect E = M^dagger M with 0 <= E <= I.
struct Measurement {
    Mat2c effect;
    Mat2c kraus;

    /// Rank-1 projector (I + n.sigma)/2 along a unit direction.
    static Measurement projector(const Vec3& n);
    /// Weak effect a I + b n.sigma with 0 < b < a, a + b <= 1.
    static Measurement weak(const Vec3& n, double a, double b);
};

struct SteeredOutcome {
    Vec3 alice_bloch;
    double probability = 0.0;
    bool defined = true;  // false when the outcome probability vanishes
    bool boundary = false;  // produced by a rank-1 projective effect
};

/// Steering ellipsoid of a canonical state: q = S S^T, centre d.
Ellipsoid ellipsoid_from_params(const CanonicalParams& params);

/// Collapses rho by (I(x)M) rho (I(x)M^dagger)/p with p = tr(rho (I(x)E)),
/// then traces out Bob. Outcomes with p < 1e-12 are flagged undefined.
SteeredOutcome steer(const TwoQubitState& state, const Measurement& m);

struct SamplerOptions {
    double weak_fraction = 0.3;  // fraction of non-projective effects
};

/// Draws n measurement directions uniformly on the sphere (per-index seeding,
/// so the sample set is identical regardless of evaluation order) and steers
/// through the full 4x4 collapse. Throws invalid_state_error if the assembled
/// state is not PSD.
std::vector<SteeredOutcome> sample_steered(const CanonicalParams& params,
                                           std::size_t n, std::uint64_t seed,
                                           const SamplerOptions& opts = {});

}  // namespace nestsim
