#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nestsim/nesting.hpp"

namespace nestsim {

/// A triangle or tetrahedron candidate with vertices on the sphere of radius
/// R and the signed clearance between each face plane and the ellipsoid.
struct SimplexCandidate {
    std::vector<Vec3> vertices;      // 3 or 4 points, each with |v| = R
    std::vector<double> face_slacks;
    double min_slack = 0.0;
};

struct OracleResult {
    bool found = false;
    bool has_witness = false;
    SimplexCandidate witness;
    int restarts_used = 0;
    double best_min_slack = -1e300;
};

struct SearchBudget {
    int restarts = 64;        // multi-start count (3-D search)
    int iterations = 400;     // local-polish iteration cap per start
};

/// Signed clearance of the half-space {x : n.x <= b} around the ellipsoid:
/// b - (n.c + |A n|) with A the principal square root of Q. Nonnegative iff
/// the ellipsoid lies inside the half-space.
double support_slack(const Vec3& face_normal, double face_offset, const Ellipsoid& e);

/// Re-evaluates a candidate from scratch: vertices on the sphere within
/// 1e-10 and every face half-space containing the ellipsoid within tol.
/// Independent of the search that produced it.
bool verify_witness(const SimplexCandidate& cand, const Ellipsoid& e, double R,
                    double certify_tol = 1e-8);

/// Max-min-slack search for a triangle inscribed in the circle of radius R in
/// the xy-plane and circumscribed about the (rank <= 2, coplanar) ellipse.
/// Coarse angular grid plus derivative-free polish; deterministic given seed.
OracleResult search_triangle_2d(const Ellipsoid& e, double R,
                                const SearchBudget& budget = {},
                                std::uint64_t seed = 0, double certify_tol = 1e-8);

/// Triangle search for a degenerate ellipsoid lying in an arbitrary plane:
/// reduces to the 2-D search on the sphere/plane intersection circle.
OracleResult search_triangle_3d(const Ellipsoid& e, double R,
                                const SearchBudget& budget = {},
                                std::uint64_t seed = 0, double certify_tol = 1e-8);

/// Multi-start max-min-slack search over tetrahedra inscribed in the sphere
/// of radius R. Starts include the regular tetrahedron aligned to the centre
/// offset; restarts are independently seeded so results do not depend on
/// evaluation order.
OracleResult search_tetrahedron_3d(const Ellipsoid& e, double R,
                                   const SearchBudget& budget = {},
                                   std::uint64_t seed = 0, double certify_tol = 1e-8);

struct QueryAgreement {
    std::size_t index = 0;
    bool excluded = false;  // |quartic| < margin: too close to the boundary
    bool predicate = false;
    bool oracle_found = false;
    double quartic = 0.0;
    double best_min_slack = 0.0;
    bool witness_verified = false;
};

struct AgreementReport {
    std::size_t total = 0;
    std::size_t excluded = 0;
    std::size_t agreements = 0;
    std::vector<QueryAgreement> results;
    std::vector<QueryAgreement> disagreements;
};

/// Runs the dimension-appropriate oracle against nesting_predicate on every
/// query outside the boundary margin band and tallies (dis)agreements.
AgreementReport verify_predicate_against_oracle(const std::vector<NestingQuery>& batch,
                                                double margin,
                                                const SearchBudget& budget = {},
                                                std::uint64_t seed = 0);

}  // namespace nestsim
