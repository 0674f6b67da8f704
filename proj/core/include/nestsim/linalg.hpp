#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace nestsim {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](std::size_t i) { return (&x)[i]; }
    double operator[](std::size_t i) const { return (&x)[i]; }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this / norm(); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// General real 3x3 matrix (row-major).
struct Mat3 {
    std::array<double, 9> e{};

    double& operator()(std::size_t i, std::size_t j) { return e[3 * i + j]; }
    double operator()(std::size_t i, std::size_t j) const { return e[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3 diag(double a, double b, double c) {
        Mat3 m;
        m(0, 0) = a;
        m(1, 1) = b;
        m(2, 2) = c;
        return m;
    }
    /// Rotation by angle about a (not necessarily unit) axis.
    static Mat3 rotation(const Vec3& axis, double angle);

    Vec3 operator*(const Vec3& v) const {
        return {e[0] * v.x + e[1] * v.y + e[2] * v.z,
                e[3] * v.x + e[4] * v.y + e[5] * v.z,
                e[6] * v.x + e[7] * v.y + e[8] * v.z};
    }
    Mat3 operator*(const Mat3& o) const;
    Mat3 operator*(double s) const;
    Mat3 operator+(const Mat3& o) const;
    Mat3 transpose() const;
    bool finite() const;
};

/// Real symmetric 3x3 matrix; only the upper triangle is stored, so symmetry
/// holds exactly by representation.
class SymMat3 {
  public:
    SymMat3() = default;
    static SymMat3 diag(double a, double b, double c) {
        SymMat3 m;
        m.v_ = {a, 0.0, 0.0, b, 0.0, c};
        return m;
    }
    static SymMat3 identity() { return diag(1.0, 1.0, 1.0); }
    /// Symmetric part of a general matrix; caller asserts m is symmetric.
    static SymMat3 from_mat3(const Mat3& m) {
        SymMat3 s;
        s.v_ = {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
                m(1, 1), 0.5 * (m(1, 2) + m(2, 1)), m(2, 2)};
        return s;
    }
    /// Q = S S^T for a general correlation matrix S.
    static SymMat3 gram(const Mat3& s);
    /// A diag(w) A^T.
    static SymMat3 conjugate_diag(const Mat3& a, const Vec3& w);

    double operator()(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return v_[idx(i, j)];
    }
    void set(std::size_t i, std::size_t j, double value) {
        if (i > j) std::swap(i, j);
        v_[idx(i, j)] = value;
    }

    double trace() const { return v_[0] + v_[3] + v_[5]; }
    double det() const;
    /// tr(Q^2) = sum of squared entries.
    double trace_sq() const;
    Vec3 operator*(const Vec3& v) const;
    Mat3 to_mat3() const;
    bool finite() const;

  private:
    static std::size_t idx(std::size_t i, std::size_t j) {
        // (0,0)(0,1)(0,2)(1,1)(1,2)(2,2)
        return i == 0 ? j : (i == 1 ? 2 + j : 3 + j);
    }
    std::array<double, 6> v_{};
};

struct EigenSystem3 {
    std::array<double, 3> values;   // descending
    std::array<Vec3, 3> vectors;    // orthonormal, vectors[k] pairs with values[k]
};

/// Jacobi eigendecomposition of a symmetric 3x3 matrix.
/// Eigenvalues sorted descending; reconstruction residual <= 1e-10.
/// Throws std::invalid_argument on non-finite input.
EigenSystem3 eig_sym3(const SymMat3& m);

/// Complex 2x2 matrix (row-major).
struct Mat2c {
    std::array<cplx, 4> e{};

    cplx& operator()(std::size_t i, std::size_t j) { return e[2 * i + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return e[2 * i + j]; }

    static Mat2c identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
    static Mat2c pauli_x() { return {{0.0, 1.0, 1.0, 0.0}}; }
    static Mat2c pauli_y() { return {{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}}; }
    static Mat2c pauli_z() { return {{1.0, 0.0, 0.0, -1.0}}; }
    static Mat2c pauli(std::size_t k);  // 0 -> identity, 1..3 -> sigma_k

    Mat2c operator+(const Mat2c& o) const;
    Mat2c operator-(const Mat2c& o) const;
    Mat2c operator*(const Mat2c& o) const;
    Mat2c operator*(cplx s) const;
    Mat2c adjoint() const;
    cplx trace() const { return e[0] + e[3]; }
    double max_abs() const;
    bool finite() const;
    bool hermitian(double tol = 1e-12) const;
};

/// Complex 4x4 matrix (row-major).
struct Mat4c {
    std::array<cplx, 16> e{};

    cplx& operator()(std::size_t i, std::size_t j) { return e[4 * i + j]; }
    cplx operator()(std::size_t i, std::size_t j) const { return e[4 * i + j]; }

    static Mat4c identity();

    Mat4c operator+(const Mat4c& o) const;
    Mat4c operator-(const Mat4c& o) const;
    Mat4c operator*(const Mat4c& o) const;
    Mat4c operator*(cplx s) const;
    Mat4c adjoint() const;
    cplx trace() const { return e[0] + e[5] + e[10] + e[15]; }
    double max_abs() const;
    bool finite() const;
    bool hermitian(double tol = 1e-12) const;
};

/// Kronecker product of two 2x2 matrices.
Mat4c kron(const Mat2c& a, const Mat2c& b);

/// Determinant by cofactor expansion. For Hermitian input the imaginary part
/// is an O(1e-12) rounding residue; the caller decides what to do with it.
cplx det4(const Mat4c& m);

/// Eigenvalues of a Hermitian 2x2 matrix, descending.
std::array<double, 2> eig_herm2(const Mat2c& m);

/// Eigenvalues of a Hermitian 4x4 matrix, descending. Computed via the real
/// symmetric 8x8 embedding [[X,-Y],[Y,X]].
std::array<double, 4> eig_herm4(const Mat4c& m);

bool is_psd(const SymMat3& m, double tol = 1e-10);
bool is_psd(const Mat2c& m, double tol = 1e-10);
bool is_psd(const Mat4c& m, double tol = 1e-10);

}  // namespace nestsim
