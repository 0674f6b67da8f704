#include "nestsim/steering.hpp"

#include "nestsim/rng.hpp"

namespace nestsim {

namespace {

Mat2c bloch_operator(const Vec3& n) {
    return Mat2c::pauli_x() * cplx(n.x) + Mat2c::pauli_y() * cplx(n.y) +
           Mat2c::pauli_z() * cplx(n.z);
}

}  // namespace

Measurement Measurement::projector(const Vec3& n) {
    Measurement m;
    m.effect = (Mat2c::identity() + bloch_operator(n.normalized())) * cplx(0.5);
    m.kraus = m.effect;  // projectors are their own square root
    return m;
}

Measurement Measurement::weak(const Vec3& n, double a, double b) {
    if (!(b > 0.0 && b < a && a + b <= 1.0 + 1e-12))
        throw std::invalid_argument("Measurement::weak: need 0 < b < a, a + b <= 1");
    const Vec3 u = n.normalized();
    Measurement m;
    m.effect = Mat2c::identity() * cplx(a) + bloch_operator(u) * cplx(b);
    // E has eigenvalues a +- b on the +-u projectors; take the principal root.
    const Mat2c pp = (Mat2c::identity() + bloch_operator(u)) * cplx(0.5);
    const Mat2c pm = (Mat2c::identity() - bloch_operator(u)) * cplx(0.5);
    m.kraus = pp * cplx(std::sqrt(a + b)) + pm * cplx(std::sqrt(a - b));
    return m;
}

Ellipsoid ellipsoid_from_params(const CanonicalParams& params) {
    if (!params.d.finite() || !params.s.finite())
        throw std::invalid_argument("ellipsoid_from_params: non-finite parameters");
    return {SymMat3::gram(params.s), params.d};
}

SteeredOutcome steer(const TwoQubitState& state, const Measurement& m) {
    const Mat2c check = m.kraus.adjoint() * m.kraus - m.effect;
    if (check.max_abs() > 1e-10)
        throw std::invalid_argument("steer: kraus operator does not match effect");

    const Mat4c lift_m = kron(Mat2c::identity(), m.kraus);
    const Mat4c lift_e = kron(Mat2c::identity(), m.effect);

    SteeredOutcome out;
    out.probability = (state.rho * lift_e).trace().real();
    if (out.probability < 1e-12) {
        out.defined = false;
        out.probability = std::max(out.probability, 0.0);
        return out;
    }

    const Mat4c collapsed =
        (lift_m * state.rho * lift_m.adjoint()) * cplx(1.0 / out.probability);

    // Alice's reduced Bloch vector: r_i = tr(collapsed (sigma_i (x) I)).
    for (std::size_t i = 0; i < 3; ++i)
        out.alice_bloch[i] =
            (collapsed * kron(Mat2c::pauli(i + 1), Mat2c::identity())).trace().real();
    return out;
}

std::vector<SteeredOutcome> sample_steered(const CanonicalParams& params,
                                           std::size_t n, std::uint64_t seed,
                                           const SamplerOptions& opts) {
    const TwoQubitState state = assemble_canonical(params);
    if (!state.valid)
        throw invalid_state_error("sample_steered: parameters do not assemble a state");

    std::vector<SteeredOutcome> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng(seed, i);
        const Vec3 dir = rng.unit_vector();
        const bool weak = rng.uniform() < opts.weak_fraction;
        Measurement m;
        if (weak) {
            const double a = rng.uniform(0.3, 0.7);
            const double b = rng.uniform(0.0, std::min(a, 1.0 - a)) * 0.999 + 1e-6;
            m = Measurement::weak(dir, a, std::min(b, a * 0.999));
        } else {
            m = Measurement::projector(dir);
        }
        out[i] = steer(state, m);
        out[i].boundary = !weak;
    }
    return out;
}

}  // namespace nestsim
