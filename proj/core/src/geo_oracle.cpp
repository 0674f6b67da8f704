#include "nestsim/geo_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "nestsim/rng.hpp"

namespace nestsim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDegenerateSlack = -1e300;

// Principal square root A of Q plus the eigensystem it came from.
struct SupportFn {
    Vec3 c;
    Mat3 a;
    EigenSystem3 es;

    explicit SupportFn(const Ellipsoid& e) : c(e.c), es(eig_sym3(e.q)) {
        Mat3 v;
        Vec3 roots;
        for (std::size_t k = 0; k < 3; ++k) {
            roots[k] = std::sqrt(std::max(es.values[k], 0.0));
            for (std::size_t i = 0; i < 3; ++i) v(i, k) = es.vectors[k][i];
        }
        a = SymMat3::conjugate_diag(v, roots).to_mat3();
    }

    // b - (n.c + |A n|) for a unit normal n.
    double slack(const Vec3& n, double b) const { return b - n.dot(c) - (a * n).norm(); }
};

// Generic Nelder-Mead maximizer on a small parameter vector.
double nelder_mead(std::vector<double>& x,
                   const std::function<double(const std::vector<double>&)>& f,
                   double scale, int max_iter) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> pts(n + 1, x);
    std::vector<double> val(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale;
    for (std::size_t i = 0; i <= n; ++i) val[i] = f(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> v2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) { p2[i] = pts[idx[i]]; v2[i] = val[idx[i]]; }
        pts.swap(p2);
        val.swap(v2);
    };
    order();

    for (int it = 0; it < max_iter; ++it) {
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / double(n);

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (centroid[j] - pts[n][j]);
            return p;
        };

        std::vector<double> refl = blend(1.0);
        const double fr = f(refl);
        if (fr > val[0]) {
            std::vector<double> exp_p = blend(2.0);
            const double fe = f(exp_p);
            if (fe > fr) { pts[n] = exp_p; val[n] = fe; }
            else { pts[n] = refl; val[n] = fr; }
        } else if (fr > val[n - 1]) {
            pts[n] = refl;
            val[n] = fr;
        } else {
            std::vector<double> con = blend(-0.5);
            const double fc = f(con);
            if (fc > val[n]) { pts[n] = con; val[n] = fc; }
            else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
                    val[i] = f(pts[i]);
                }
            }
        }
        order();
        if (std::abs(val[0] - val[n]) < 1e-14 * std::max(1.0, std::abs(val[0]))) break;
    }
    x = pts[0];
    return val[0];
}

// Coordinate descent with a shrinking step; final sharpening after NM.
double coordinate_polish(std::vector<double>& x,
                         const std::function<double(const std::vector<double>&)>& f,
                         double step0, double step_min, int pass_cap) {
    double best = f(x);
    for (double step = step0; step > step_min; step *= 0.5) {
        for (int pass = 0; pass < pass_cap; ++pass) {
            bool improved = false;
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (double s : {step, -step}) {
                    std::vector<double> y = x;
                    y[i] += s;
                    const double v = f(y);
                    if (v > best) { best = v; x = y; improved = true; }
                }
            }
            if (!improved) break;
        }
    }
    return best;
}

// ---- triangle in the xy-plane ------------------------------------------

Vec3 circle_point(double R, double theta) {
    return {R * std::cos(theta), R * std::sin(theta), 0.0};
}

double triangle_min_slack(const SupportFn& sf, double R,
                          const std::vector<double>& theta,
                          std::vector<double>* slacks = nullptr) {
    const Vec3 v[3] = {circle_point(R, theta[0]), circle_point(R, theta[1]),
                       circle_point(R, theta[2])};
    const double area2 = (v[1] - v[0]).cross(v[2] - v[0]).z;
    if (std::abs(area2) < 1e-12 * R * R) return kDegenerateSlack;

    double m = 1e300;
    if (slacks) slacks->assign(3, 0.0);
    for (int i = 0; i < 3; ++i) {
        const Vec3& p = v[i];
        const Vec3& q = v[(i + 1) % 3];
        const Vec3& opp = v[(i + 2) % 3];
        const Vec3 t = q - p;
        Vec3 n{t.y, -t.x, 0.0};
        n = n / n.norm();
        double b = n.dot(p);
        if (n.dot(opp) > b) { n = -n; b = -b; }  // outward: the triangle is on the <= side
        const double s = sf.slack(n, b);
        if (slacks) (*slacks)[i] = s;
        m = std::min(m, s);
    }
    return m;
}

SimplexCandidate make_triangle_witness(const SupportFn& sf, double R,
                                       const std::vector<double>& theta) {
    SimplexCandidate cand;
    cand.vertices = {circle_point(R, theta[0]), circle_point(R, theta[1]),
                     circle_point(R, theta[2])};
    cand.min_slack = triangle_min_slack(sf, R, theta, &cand.face_slacks);
    return cand;
}

// ---- tetrahedron ---------------------------------------------------------

Vec3 sphere_point(double R, double theta, double phi) {
    const double s = std::sin(theta);
    return {R * s * std::cos(phi), R * s * std::sin(phi), R * std::cos(theta)};
}

double tetra_min_slack(const SupportFn& sf, double R, const std::vector<double>& ang,
                       std::vector<double>* slacks = nullptr) {
    Vec3 v[4];
    for (int i = 0; i < 4; ++i) v[i] = sphere_point(R, ang[2 * i], ang[2 * i + 1]);
    const double vol6 =
        std::abs((v[1] - v[0]).dot((v[2] - v[0]).cross(v[3] - v[0])));
    if (vol6 < 6e-12 * R * R * R) return kDegenerateSlack;

    const Vec3 g = (v[0] + v[1] + v[2] + v[3]) / 4.0;
    double m = 1e300;
    if (slacks) slacks->assign(4, 0.0);
    for (int skip = 0; skip < 4; ++skip) {
        const Vec3& p = v[(skip + 1) % 4];
        const Vec3& q = v[(skip + 2) % 4];
        const Vec3& r = v[(skip + 3) % 4];
        Vec3 n = (q - p).cross(r - p);
        const double nn = n.norm();
        if (nn < 1e-12 * R * R) return kDegenerateSlack;
        n = n / nn;
        double b = n.dot(p);
        if (n.dot(g) > b) { n = -n; b = -b; }
        const double s = sf.slack(n, b);
        if (slacks) (*slacks)[skip] = s;
        m = std::min(m, s);
    }
    return m;
}

void angles_from_vertex(const Vec3& v, double& theta, double& phi) {
    theta = std::acos(std::clamp(v.z / v.norm(), -1.0, 1.0));
    phi = std::atan2(v.y, v.x);
}

std::vector<double> angles_from_vertices(const Vec3 (&v)[4]) {
    std::vector<double> ang(8);
    for (int i = 0; i < 4; ++i) angles_from_vertex(v[i], ang[2 * i], ang[2 * i + 1]);
    return ang;
}

// Regular tetrahedron inscribed in the unit sphere, symmetry axis +z.
void regular_tetrahedron(Vec3 (&v)[4]) {
    v[0] = {0.0, 0.0, 1.0};
    const double z = -1.0 / 3.0;
    const double s = std::sqrt(8.0) / 3.0;
    for (int k = 0; k < 3; ++k) {
        const double ph = kTwoPi * k / 3.0;
        v[k + 1] = {s * std::cos(ph), s * std::sin(ph), z};
    }
}

}  // namespace

double support_slack(const Vec3& face_normal, double face_offset, const Ellipsoid& e) {
    if (std::abs(face_normal.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("support_slack: normal must be a unit vector");
    return SupportFn(e).slack(face_normal, face_offset);
}

bool verify_witness(const SimplexCandidate& cand, const Ellipsoid& e, double R,
                    double certify_tol) {
    for (const Vec3& v : cand.vertices)
        if (std::abs(v.norm() - R) > 1e-10) return false;

    const SupportFn sf(e);
    if (cand.vertices.size() == 4) {
        Vec3 v[4];
        for (int i = 0; i < 4; ++i) v[i] = cand.vertices[i];
        return tetra_min_slack(sf, R, angles_from_vertices(v)) >= -certify_tol;
    }
    if (cand.vertices.size() != 3) return false;

    // Triangle: the ellipsoid must lie in the triangle's plane and inside the
    // three edge half-planes of that plane.
    const Vec3& p = cand.vertices[0];
    Vec3 n = (cand.vertices[1] - p).cross(cand.vertices[2] - p);
    const double nn = n.norm();
    if (nn < 1e-12 * R * R) return false;
    n = n / nn;
    const double off_plane =
        std::abs(n.dot(e.c) - n.dot(p)) + (sf.a * n).norm();
    if (off_plane > certify_tol + 1e-10) return false;

    const Vec3 g = (cand.vertices[0] + cand.vertices[1] + cand.vertices[2]) / 3.0;
    for (int i = 0; i < 3; ++i) {
        const Vec3& a = cand.vertices[i];
        const Vec3& b = cand.vertices[(i + 1) % 3];
        Vec3 m = (b - a).cross(n);  // in-plane edge normal
        m = m / m.norm();
        double off = m.dot(a);
        if (m.dot(g) > off) { m = -m; off = -off; }
        if (sf.slack(m, off) < -certify_tol) return false;
    }
    return true;
}

OracleResult search_triangle_2d(const Ellipsoid& e, double R,
                                const SearchBudget& budget, std::uint64_t seed,
                                double certify_tol) {
    const EigenSystem3 es = eig_sym3(e.q);
    const double lmax = std::max(es.values[0], 0.0);
    const double planar_tol = 1e-10 * std::max(1.0, lmax);
    if (std::abs(e.q(0, 2)) > planar_tol || std::abs(e.q(1, 2)) > planar_tol ||
        std::abs(e.q(2, 2)) > planar_tol || std::abs(e.c.z) > 1e-10)
        throw std::invalid_argument("search_triangle_2d: ellipsoid is not in the xy-plane");

    const SupportFn sf(e);
    auto objective = [&](const std::vector<double>& th) {
        return triangle_min_slack(sf, R, th);
    };

    // Symmetry starts: equilateral triangles, one aligned against the centre
    // offset (the optimum for circles sits there).
    std::vector<std::vector<double>> starts;
    std::vector<double> base_phis = {0.0, std::numbers::pi / 3.0};
    if (e.c.norm() > 1e-14) {
        const double phi_c = std::atan2(-e.c.y, -e.c.x);
        base_phis.push_back(phi_c);
        base_phis.push_back(phi_c + std::numbers::pi / 3.0);
    }
    for (double p0 : base_phis)
        starts.push_back({p0, p0 + kTwoPi / 3.0, p0 + 2.0 * kTwoPi / 3.0});

    // Coarse grid, theta1 reduced to a third of the circle by relabelling.
    const int n1 = 8, n2 = 24;
    struct Scored { double value; std::vector<double> theta; };
    std::vector<Scored> top;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j)
            for (int k = 0; k < n2; ++k) {
                std::vector<double> th = {kTwoPi / 3.0 * i / n1, kTwoPi * j / n2,
                                          kTwoPi * k / n2};
                top.push_back({objective(th), std::move(th)});
            }
    std::sort(top.begin(), top.end(),
              [](const Scored& a, const Scored& b) { return a.value > b.value; });
    const std::size_t keep = std::min<std::size_t>(top.size(), 12);
    for (std::size_t i = 0; i < keep; ++i) starts.push_back(top[i].theta);

    // A few random restarts for good measure.
    SplitMix64 rng(seed);
    for (int r = 0; r < std::max(0, budget.restarts / 8); ++r)
        starts.push_back({rng.uniform(0.0, kTwoPi), rng.uniform(0.0, kTwoPi),
                          rng.uniform(0.0, kTwoPi)});

    OracleResult res;
    std::vector<double> best_theta;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        std::vector<double> x = starts[s];
        double v = objective(x);
        if (v > kDegenerateSlack / 2) {
            v = nelder_mead(x, objective, 0.25, budget.iterations);
            v = coordinate_polish(x, objective, 0.05, 1e-9, 6);
        }
        if (v > res.best_min_slack) {
            res.best_min_slack = v;
            best_theta = x;
        }
        ++res.restarts_used;
    }

    res.found = res.best_min_slack >= -certify_tol;
    if (!best_theta.empty()) {
        res.witness = make_triangle_witness(sf, R, best_theta);
        res.has_witness = res.found;
    }
    return res;
}

OracleResult search_triangle_3d(const Ellipsoid& e, double R,
                                const SearchBudget& budget, std::uint64_t seed,
                                double certify_tol) {
    const EigenSystem3 es = eig_sym3(e.q);
    const double lmax = std::max(es.values[0], 0.0);
    int rank = 0;
    for (double l : es.values)
        if (l > 1e-12 * std::max(lmax, 1e-300)) ++rank;
    if (rank > 2)
        throw std::invalid_argument("search_triangle_3d: ellipsoid is not degenerate");

    // Plane of the ellipse. Rank 2: normal is the null eigenvector. Rank <= 1:
    // pick the plane spanned by the long axis (or anything) and the centre, so
    // it passes through the origin and meets the sphere in a great circle.
    Vec3 n;
    if (rank == 2) {
        n = es.vectors[2];
    } else {
        const Vec3 dir = rank == 1 ? es.vectors[0] : Vec3{1.0, 0.0, 0.0};
        Vec3 cand = dir.cross(e.c);
        if (cand.norm() < 1e-12) {
            cand = dir.cross(Vec3{1.0, 0.0, 0.0});
            if (cand.norm() < 1e-12) cand = dir.cross(Vec3{0.0, 1.0, 0.0});
        }
        n = cand.normalized();
    }

    const double h = n.dot(e.c);
    if (std::abs(h) >= R - 1e-12) {
        OracleResult res;
        res.best_min_slack = -R;
        return res;  // the plane barely grazes the sphere: no triangle
    }
    const double r_circ = std::sqrt(R * R - h * h);
    const Vec3 p0 = n * h;

    // In-plane orthonormal basis.
    Vec3 e1 = n.cross(std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0});
    e1 = e1.normalized();
    const Vec3 e2 = n.cross(e1);

    Ellipsoid flat;
    const Vec3 c_rel = e.c - p0;
    flat.c = {e1.dot(c_rel), e2.dot(c_rel), 0.0};
    const Vec3 qe1 = e.q * e1, qe2 = e.q * e2;
    flat.q.set(0, 0, e1.dot(qe1));
    flat.q.set(0, 1, e1.dot(qe2));
    flat.q.set(1, 1, e2.dot(qe2));

    OracleResult res = search_triangle_2d(flat, r_circ, budget, seed, certify_tol);
    if (!res.witness.vertices.empty()) {
        for (Vec3& v : res.witness.vertices) v = p0 + v.x * e1 + v.y * e2;
    }
    return res;
}

OracleResult search_tetrahedron_3d(const Ellipsoid& e, double R,
                                   const SearchBudget& budget, std::uint64_t seed,
                                   double certify_tol) {
    const SupportFn sf(e);
    auto objective = [&](const std::vector<double>& ang) {
        return tetra_min_slack(sf, R, ang);
    };

    OracleResult res;
    std::vector<double> best_ang;
    const int total = std::max(budget.restarts, 2);
    for (int restart = 0; restart < total; ++restart) {
        SplitMix64 rng(seed, static_cast<std::uint64_t>(restart));
        Vec3 v[4];
        regular_tetrahedron(v);
        Mat3 rot = Mat3::identity();
        if (restart == 0 || restart == 1) {
            // Symmetry starts: regular tetrahedron with its apex along +-c.
            if (e.c.norm() > 1e-14) {
                const Vec3 target = (restart == 0 ? e.c : -e.c).normalized();
                const Vec3 axis = Vec3{0.0, 0.0, 1.0}.cross(target);
                const double angle = std::acos(std::clamp(target.z, -1.0, 1.0));
                if (axis.norm() > 1e-12) rot = Mat3::rotation(axis, angle);
                else if (target.z < 0.0) rot = Mat3::rotation({1.0, 0.0, 0.0}, std::numbers::pi);
            }
        } else {
            rot = Mat3::rotation(rng.unit_vector(), rng.uniform(0.0, kTwoPi));
        }
        for (Vec3& p : v) p = rot * p * R;
        if (restart >= 2 && restart % 3 == 2) {
            // Every third restart starts from four independent directions.
            for (Vec3& p : v) p = rng.unit_vector() * R;
        }

        std::vector<double> x = angles_from_vertices(v);
        double val = objective(x);
        if (val > kDegenerateSlack / 2) {
            val = nelder_mead(x, objective, 0.35, budget.iterations);
            val = nelder_mead(x, objective, 0.05, budget.iterations / 2);
            val = coordinate_polish(x, objective, 0.02, 1e-8, 4);
        }
        if (val > res.best_min_slack) {
            res.best_min_slack = val;
            best_ang = x;
        }
        ++res.restarts_used;
    }

    res.found = res.best_min_slack >= -certify_tol;
    if (!best_ang.empty()) {
        SimplexCandidate cand;
        cand.vertices.resize(4);
        for (int i = 0; i < 4; ++i)
            cand.vertices[i] = sphere_point(R, best_ang[2 * i], best_ang[2 * i + 1]);
        cand.min_slack = tetra_min_slack(sf, R, best_ang, &cand.face_slacks);
        res.witness = std::move(cand);
        res.has_witness = res.found;
    }
    return res;
}

AgreementReport verify_predicate_against_oracle(const std::vector<NestingQuery>& batch,
                                                double margin,
                                                const SearchBudget& budget,
                                                std::uint64_t seed) {
    AgreementReport report;
    report.total = batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        NestingReport pred;
        try {
            pred = nesting_predicate(batch[i]);
        } catch (const containment_error&) {
            throw containment_error("verify_predicate_against_oracle: query " +
                                    std::to_string(i) + " is not contained");
        }

        QueryAgreement qa;
        qa.index = i;
        qa.predicate = pred.nested_exists;
        qa.quartic = pred.quartic;
        if (std::abs(pred.quartic) < margin) {
            qa.excluded = true;
            ++report.excluded;
            report.results.push_back(qa);
            continue;
        }

        const std::uint64_t sub_seed = SplitMix64(seed, i).next();
        const OracleResult r =
            pred.degenerate
                ? search_triangle_3d(batch[i].ellipsoid, batch[i].big_radius, budget, sub_seed)
                : search_tetrahedron_3d(batch[i].ellipsoid, batch[i].big_radius, budget, sub_seed);
        qa.oracle_found = r.found;
        qa.best_min_slack = r.best_min_slack;
        if (r.found)
            qa.witness_verified =
                verify_witness(r.witness, batch[i].ellipsoid, batch[i].big_radius);
        if (qa.oracle_found == qa.predicate) ++report.agreements;
        else report.disagreements.push_back(qa);
        report.results.push_back(qa);
    }
    return report;
}

}  // namespace nestsim
