#pragma once

#include <stdexcept>

#include "nestsim/steering.hpp"

namespace nestsim {

struct NestingQuery {
    Ellipsoid ellipsoid;
    double big_radius = 1.0;  // sphere B centred at the origin
};

enum class QuarticBranch { lower, upper, no_real_roots };

struct NestingReport {
    double u = 0.0;
    double q_coef = 0.0;
    double skew = 0.0;     // d_hat^T Q d_hat (0 when the centres coincide)
    double quartic = 0.0;  // d^4 - 2 u d^2 + q
    bool contained = false;
    double max_radius = 0.0;
    bool nested_exists = false;
    bool degenerate = false;  // rank(Q) <= 2: the simplex can be a triangle
    QuarticBranch branch = QuarticBranch::lower;
    bool upper_branch_anomaly = false;
};

struct containment_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Farthest distance from the origin to a point of the ellipsoid, i.e. the
/// smallest sphere radius about the origin that contains it. Secular-equation
/// root finding on max |c + A u|, |u| = 1; absolute accuracy 1e-10.
double max_radius(const Ellipsoid& e);

/// The quartic existence test for a simplex circumscribed about the ellipsoid
/// and inscribed in the sphere of radius R. Throws containment_error when the
/// ellipsoid is not inside the sphere (the quartic sign is meaningless there).
NestingReport nesting_predicate(const NestingQuery& query, double tol = 1e-10);

/// Largest admissible d^2 for a circle of radius r in a circle of radius R:
/// R(R - 2r). A negative value means no nested triangle for any offset.
double circle_condition(double R, double r);

/// Grace-Danielsson bound for a sphere in a sphere: (R + r)(R - 3r).
double sphere_condition(double R, double r);

/// Axis-aligned ellipsoid with its s1 axis collinear with the centre offset:
/// (R - s1)^2 - (s2 + s3)^2.
double aligned_ellipsoid_condition(double R, double s1, double s2, double s3);

/// Euler inequality R >= n r: minimal circumradius for inradius r.
double euler_min_R(int n, double r);

/// Egan's n-dimensional bound (R + (n-2)r)(R - nr). Proven sufficient;
/// necessity is open for n >= 4.
double egan_bound(int n, double R, double r);

}  // namespace nestsim
