#include "nestsim/nesting.hpp"

#include <algorithm>
#include <cmath>

namespace nestsim {

namespace {

struct Principal {
    std::array<double, 3> axis;  // semiaxes a_i = sqrt(lambda_i), descending
    std::array<double, 3> c;     // centre in the eigenbasis
    double lambda_max = 0.0;
};

Principal principal_frame(const Ellipsoid& e) {
    const EigenSystem3 es = eig_sym3(e.q);
    Principal p;
    p.lambda_max = std::max(es.values[0], 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        p.axis[i] = std::sqrt(std::max(es.values[i], 0.0));
        p.c[i] = es.vectors[i].dot(e.c);
    }
    return p;
}

// |c + D u| for the unit vector u given in the eigenbasis.
double extent(const Principal& p, const std::array<double, 3>& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double x = p.c[i] + p.axis[i] * u[i];
        s += x * x;
    }
    return std::sqrt(s);
}

// Spherical-coordinate local polish of max |c + D u|; only reached when the
// secular solve is inconsistent with a coarse directional sample.
double directional_polish(const Principal& p, std::array<double, 3> u0) {
    double theta = std::acos(std::clamp(u0[2], -1.0, 1.0));
    double phi = std::atan2(u0[1], u0[0]);
    auto value = [&](double th, double ph) {
        const std::array<double, 3> u = {std::sin(th) * std::cos(ph),
                                         std::sin(th) * std::sin(ph), std::cos(th)};
        return extent(p, u);
    };
    double best = value(theta, phi);
    for (double step = 0.5; step > 1e-12; step *= 0.618) {
        bool improved = true;
        while (improved) {
            improved = false;
            const double cand_t[2] = {theta + step, theta - step};
            const double cand_p[2] = {phi + step, phi - step};
            for (double t : cand_t)
                if (value(t, phi) > best) { best = value(t, phi); theta = t; improved = true; }
            for (double q : cand_p)
                if (value(theta, q) > best) { best = value(theta, q); phi = q; improved = true; }
        }
    }
    return best;
}

}  // namespace

double max_radius(const Ellipsoid& e) {
    if (!e.q.finite() || !e.c.finite())
        throw std::invalid_argument("max_radius: non-finite ellipsoid");
    const Principal p = principal_frame(e);
    const double a_max = p.axis[0];
    const double d = std::sqrt(p.c[0] * p.c[0] + p.c[1] * p.c[1] + p.c[2] * p.c[2]);
    if (d <= 1e-14) return a_max;
    if (a_max <= 1e-14) return d;

    const double mu_top = a_max * a_max;
    const double top_band = 1e-13 * mu_top;
    std::array<bool, 3> top{};
    for (std::size_t i = 0; i < 3; ++i)
        top[i] = (mu_top - p.axis[i] * p.axis[i]) <= top_band;

    std::array<double, 3> w{};
    double w_top_sq = 0.0, w_sq = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = p.axis[i] * p.c[i];
        w_sq += w[i] * w[i];
        if (top[i]) w_top_sq += w[i] * w[i];
    }

    auto phi = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double den = mu - p.axis[i] * p.axis[i];
            s += (w[i] * w[i]) / (den * den);
        }
        return s;
    };

    double result;
    double interior = 0.0;  // sum over non-top coords at mu = a_max^2
    if (w_top_sq <= 1e-28 * std::max(1.0, w_sq)) {
        for (std::size_t i = 0; i < 3; ++i) {
            if (top[i]) continue;
            const double den = mu_top - p.axis[i] * p.axis[i];
            interior += (w[i] * w[i]) / (den * den);
        }
    }
    if (w_top_sq <= 1e-28 * std::max(1.0, w_sq) && interior <= 1.0) {
        // Hard case: the centre has no component along the longest axis; the
        // maximiser pads the unit vector inside that eigenspace.
        double sq = mu_top * (1.0 - interior);
        for (std::size_t i = 0; i < 3; ++i) {
            if (top[i]) continue;
            const double den = mu_top - p.axis[i] * p.axis[i];
            const double x = p.c[i] * mu_top / den;
            sq += x * x;
        }
        result = std::sqrt(sq);
    } else {
        // Unique secular root in (a_max^2, a_max^2 + sqrt(sum w^2)].
        double lo = mu_top;
        double hi = mu_top + std::sqrt(w_sq) + 1e-30;
        while (phi(hi) > 1.0) hi = mu_top + 2.0 * (hi - mu_top);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (phi(mid) > 1.0 ? lo : hi) = mid;
        }
        const double mu = 0.5 * (lo + hi);
        double sq = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double x = p.c[i] * mu / (mu - p.axis[i] * p.axis[i]);
            sq += x * x;
        }
        result = std::sqrt(sq);
    }

    // Cross-check against a coarse directional sample; fall back to a local
    // polish if the secular answer is beaten (it should never be).
    std::array<double, 3> best_u = {0, 0, 0};
    double best = 0.0;
    for (int ix = -2; ix <= 2; ++ix)
        for (int iy = -2; iy <= 2; ++iy)
            for (int iz = -2; iz <= 2; ++iz) {
                if (ix == 0 && iy == 0 && iz == 0) continue;
                std::array<double, 3> u = {double(ix), double(iy), double(iz)};
                const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
                for (double& x : u) x /= n;
                const double f = extent(p, u);
                if (f > best) { best = f; best_u = u; }
            }
    if (best > result + 1e-12)
        result = std::max(result, directional_polish(p, best_u));
    return result;
}

NestingReport nesting_predicate(const NestingQuery& query, double tol) {
    const Ellipsoid& e = query.ellipsoid;
    const double R = query.big_radius;
    if (!(R > 0.0)) throw std::invalid_argument("nesting_predicate: R must be positive");

    const EigenSystem3 es = eig_sym3(e.q);
    const double lmax = std::max(es.values[0], 0.0);
    if (es.values[2] < -std::max(1e-10, 1e-12 * lmax))
        throw std::invalid_argument("nesting_predicate: Q is not positive semi-definite");

    NestingReport rep;
    rep.max_radius = max_radius(e);
    if (rep.max_radius > R + tol)
        throw containment_error("nesting_predicate: ellipsoid is not contained in the sphere");
    rep.contained = true;

    int rank = 0;
    for (double l : es.values)
        if (l > 1e-12 * std::max(lmax, 1e-300)) ++rank;
    rep.degenerate = rank <= 2;

    const double d = e.c.norm();
    if (d > 1e-14) {
        const Vec3 dh = e.c / d;
        rep.skew = dh.dot(e.q * dh);
    }

    const double trq = e.q.trace();
    const double trq2 = e.q.trace_sq();
    double detq = e.q.det();
    if (detq < 0.0) {
        if (detq < -1e-14)
            throw std::invalid_argument("nesting_predicate: det Q is negative beyond tolerance");
        detq = 0.0;
    }

    rep.u = R * R - trq + 2.0 * rep.skew;
    rep.q_coef = R * R * R * R - 2.0 * R * R * trq - 8.0 * R * std::sqrt(detq) +
                 2.0 * trq2 - trq * trq;
    const double d2 = d * d;
    rep.quartic = d2 * d2 - 2.0 * rep.u * d2 + rep.q_coef;
    rep.nested_exists = rep.quartic >= -tol;

    const double disc = rep.u * rep.u - rep.q_coef;
    if (disc < 0.0) {
        rep.branch = QuarticBranch::no_real_roots;
    } else {
        const double root = std::sqrt(disc);
        const double lower = rep.u - root, upper = rep.u + root;
        rep.branch = (d2 - lower <= upper - d2) ? QuarticBranch::lower
                                                : QuarticBranch::upper;
        rep.upper_branch_anomaly =
            rep.nested_exists && rep.branch == QuarticBranch::upper;
    }
    return rep;
}

double circle_condition(double R, double r) {
    if (!(R > 0.0) || r < 0.0 || r > R)
        throw std::invalid_argument("circle_condition: need R > 0 and 0 <= r <= R");
    return R * (R - 2.0 * r);
}

double sphere_condition(double R, double r) {
    if (!(R > 0.0) || r < 0.0 || r > R)
        throw std::invalid_argument("sphere_condition: need R > 0 and 0 <= r <= R");
    return (R + r) * (R - 3.0 * r);
}

double aligned_ellipsoid_condition(double R, double s1, double s2, double s3) {
    if (!(R > 0.0) || s1 < 0.0 || s2 < 0.0 || s3 < 0.0)
        throw std::invalid_argument("aligned_ellipsoid_condition: negative argument");
    return (R - s1) * (R - s1) - (s2 + s3) * (s2 + s3);
}

double euler_min_R(int n, double r) {
    if (r < 0.0) throw std::invalid_argument("euler_min_R: negative inradius");
    if (n != 2 && n != 3) throw std::invalid_argument("euler_min_R: n must be 2 or 3");
    return n * r;
}

double egan_bound(int n, double R, double r) {
    if (n < 2) throw std::invalid_argument("egan_bound: need n >= 2");
    if (!(R > 0.0) || r < 0.0)
        throw std::invalid_argument("egan_bound: need R > 0 and r >= 0");
    return (R + (n - 2) * r) * (R - n * r);
}

}  // namespace nestsim
