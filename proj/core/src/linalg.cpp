#include "nestsim/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace nestsim {

Mat3 Mat3::rotation(const Vec3& axis, double angle) {
    const Vec3 u = axis.normalized();
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    Mat3 m;
    m(0, 0) = c + u.x * u.x * t;
    m(0, 1) = u.x * u.y * t - u.z * s;
    m(0, 2) = u.x * u.z * t + u.y * s;
    m(1, 0) = u.y * u.x * t + u.z * s;
    m(1, 1) = c + u.y * u.y * t;
    m(1, 2) = u.y * u.z * t - u.x * s;
    m(2, 0) = u.z * u.x * t - u.y * s;
    m(2, 1) = u.z * u.y * t + u.x * s;
    m(2, 2) = c + u.z * u.z * t;
    return m;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 Mat3::operator*(double s) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.e[i] = e[i] * s;
    return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
    Mat3 r;
    for (std::size_t i = 0; i < 9; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
}

bool Mat3::finite() const {
    for (double v : e)
        if (!std::isfinite(v)) return false;
    return true;
}

SymMat3 SymMat3::gram(const Mat3& s) {
    SymMat3 q;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 3; ++k) acc += s(i, k) * s(j, k);
            q.set(i, j, acc);
        }
    return q;
}

SymMat3 SymMat3::conjugate_diag(const Mat3& a, const Vec3& w) {
    SymMat3 q;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 3; ++k) acc += a(i, k) * w[k] * a(j, k);
            q.set(i, j, acc);
        }
    return q;
}

double SymMat3::det() const {
    const SymMat3& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(1, 2)) -
           m(0, 1) * (m(0, 1) * m(2, 2) - m(1, 2) * m(0, 2)) +
           m(0, 2) * (m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2));
}

double SymMat3::trace_sq() const {
    const SymMat3& m = *this;
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) s += m(i, j) * m(i, j);
    return s;
}

Vec3 SymMat3::operator*(const Vec3& v) const {
    const SymMat3& m = *this;
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(0, 1) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(0, 2) * v.x + m(1, 2) * v.y + m(2, 2) * v.z};
}

Mat3 SymMat3::to_mat3() const {
    Mat3 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) r(i, j) = (*this)(i, j);
    return r;
}

bool SymMat3::finite() const {
    for (double v : v_)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {

// Cyclic Jacobi on a small symmetric matrix held in a[n][n]; accumulates the
// rotations into v. Converges to machine precision in a handful of sweeps.
template <std::size_t N>
void jacobi_sym(std::array<std::array<double, N>, N>& a,
                std::array<std::array<double, N>, N>& v) {
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = a[q][p] = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

}  // namespace

EigenSystem3 eig_sym3(const SymMat3& m) {
    if (!m.finite()) throw std::invalid_argument("eig_sym3: non-finite input");

    std::array<std::array<double, 3>, 3> a{}, v{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a[i][j] = m(i, j);
    jacobi_sym<3>(a, v);

    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int p, int q) { return a[p][p] > a[q][q]; });

    EigenSystem3 out;
    for (std::size_t k = 0; k < 3; ++k) {
        const int j = order[k];
        out.values[k] = a[j][j];
        out.vectors[k] = {v[0][j], v[1][j], v[2][j]};
    }
    return out;
}

Mat2c Mat2c::pauli(std::size_t k) {
    switch (k) {
        case 0: return identity();
        case 1: return pauli_x();
        case 2: return pauli_y();
        default: return pauli_z();
    }
}

Mat2c Mat2c::operator+(const Mat2c& o) const {
    Mat2c r;
    for (std::size_t i = 0; i < 4; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat2c Mat2c::operator-(const Mat2c& o) const {
    Mat2c r;
    for (std::size_t i = 0; i < 4; ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

Mat2c Mat2c::operator*(const Mat2c& o) const {
    Mat2c r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
    return r;
}

Mat2c Mat2c::operator*(cplx s) const {
    Mat2c r;
    for (std::size_t i = 0; i < 4; ++i) r.e[i] = e[i] * s;
    return r;
}

Mat2c Mat2c::adjoint() const {
    Mat2c r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

double Mat2c::max_abs() const {
    double m = 0.0;
    for (const cplx& c : e) m = std::max(m, std::abs(c));
    return m;
}

bool Mat2c::finite() const {
    for (const cplx& c : e)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool Mat2c::hermitian(double tol) const {
    const Mat2c d = *this - adjoint();
    return d.max_abs() <= tol;
}

Mat4c Mat4c::identity() {
    Mat4c m;
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

Mat4c Mat4c::operator+(const Mat4c& o) const {
    Mat4c r;
    for (std::size_t i = 0; i < 16; ++i) r.e[i] = e[i] + o.e[i];
    return r;
}

Mat4c Mat4c::operator-(const Mat4c& o) const {
    Mat4c r;
    for (std::size_t i = 0; i < 16; ++i) r.e[i] = e[i] - o.e[i];
    return r;
}

Mat4c Mat4c::operator*(const Mat4c& o) const {
    Mat4c r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cplx s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat4c Mat4c::operator*(cplx s) const {
    Mat4c r;
    for (std::size_t i = 0; i < 16; ++i) r.e[i] = e[i] * s;
    return r;
}

Mat4c Mat4c::adjoint() const {
    Mat4c r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

double Mat4c::max_abs() const {
    double m = 0.0;
    for (const cplx& c : e) m = std::max(m, std::abs(c));
    return m;
}

bool Mat4c::finite() const {
    for (const cplx& c : e)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool Mat4c::hermitian(double tol) const {
    const Mat4c d = *this - adjoint();
    return d.max_abs() <= tol;
}

Mat4c kron(const Mat2c& a, const Mat2c& b) {
    Mat4c r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

namespace {

cplx det3_minor(const Mat4c& m, std::size_t skip_row, std::size_t skip_col) {
    std::array<std::size_t, 3> r{}, c{};
    std::size_t ri = 0, ci = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (i != skip_row) r[ri++] = i;
        if (i != skip_col) c[ci++] = i;
    }
    return m(r[0], c[0]) * (m(r[1], c[1]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[1])) -
           m(r[0], c[1]) * (m(r[1], c[0]) * m(r[2], c[2]) - m(r[1], c[2]) * m(r[2], c[0])) +
           m(r[0], c[2]) * (m(r[1], c[0]) * m(r[2], c[1]) - m(r[1], c[1]) * m(r[2], c[0]));
}

}  // namespace

cplx det4(const Mat4c& m) {
    if (!m.finite()) throw std::invalid_argument("det4: non-finite input");
    cplx d = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < 4; ++j) {
        d += sign * m(0, j) * det3_minor(m, 0, j);
        sign = -sign;
    }
    return d;
}

std::array<double, 2> eig_herm2(const Mat2c& m) {
    const double tr = m.trace().real();
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    return {0.5 * tr + disc, 0.5 * tr - disc};
}

std::array<double, 4> eig_herm4(const Mat4c& m) {
    if (!m.finite()) throw std::invalid_argument("eig_herm4: non-finite input");
    // [[X,-Y],[Y,X]] is real symmetric for Hermitian X+iY, with each
    // eigenvalue of m doubled.
    std::array<std::array<double, 8>, 8> a{}, v{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double x = m(i, j).real();
            const double y = m(i, j).imag();
            a[i][j] = x;
            a[i + 4][j + 4] = x;
            a[i][j + 4] = -y;
            a[i + 4][j] = y;
        }
    jacobi_sym<8>(a, v);
    std::array<double, 8> ev{};
    for (std::size_t i = 0; i < 8; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return {ev[0], ev[2], ev[4], ev[6]};
}

bool is_psd(const SymMat3& m, double tol) {
    if (!m.finite()) throw std::invalid_argument("is_psd: non-finite input");
    const EigenSystem3 es = eig_sym3(m);
    return es.values[2] >= -tol;
}

bool is_psd(const Mat2c& m, double tol) {
    if (!m.finite()) throw std::invalid_argument("is_psd: non-finite input");
    if (!m.hermitian(1e-9 * std::max(1.0, m.max_abs())))
        throw std::invalid_argument("is_psd: matrix is not Hermitian");
    return eig_herm2(m)[1] >= -tol;
}

bool is_psd(const Mat4c& m, double tol) {
    if (!m.finite()) throw std::invalid_argument("is_psd: non-finite input");
    if (!m.hermitian(1e-9 * std::max(1.0, m.max_abs())))
        throw std::invalid_argument("is_psd: matrix is not Hermitian");
    return eig_herm4(m)[3] >= -tol;
}

}  // namespace nestsim
