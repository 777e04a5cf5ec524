#pragma once

#include "iwasawa/model.hpp"

#include <Eigen/SVD>

namespace iwasawa {

/// Subspace of g_alpha with constant Kaehler angle phi. Columns of basis are
/// orthonormal vectors in full algebra coordinates (B and Z rows zero).
struct KahlerSubspace {
    Mat basis;      // 2n x k
    int k = 0;
    double phi = 0.0;
};

/// Kaehler angle of a single nonzero vector with respect to a subspace
/// containing it: cos(phi) = |proj(J v)| / |v|.
inline double kahler_angle(const Model& m, const Mat& basis, const Vec& v) {
    m.check_size(v);
    const double vn = v.norm();
    if (vn < 1e-14) throw std::invalid_argument("kahler_angle: zero vector");
    const Vec coeffs = basis.transpose() * v;
    if ((v - basis * coeffs).norm() > 1e-10 * vn)
        throw std::invalid_argument("kahler_angle: vector not in the subspace");
    const Vec Jv = m.apply_J(v);
    const double c = (basis.transpose() * Jv).norm() / vn;
    return std::acos(std::min(1.0, std::max(0.0, c)));
}

/// Constancy check: the compressed complex structure basis^T J basis has all
/// singular values equal (= cos phi) iff the angle is constant on the subspace.
/// Returns (phi, max singular-value spread).
inline std::pair<double, double> constant_angle_check(const Model& m, const Mat& basis) {
    const Mat C = basis.transpose() * m.J_matrix() * basis;
    Eigen::JacobiSVD<Mat> svd(C);
    const Vec sv = svd.singularValues();
    const double c = sv.size() ? sv[0] : 0.0;
    const double spread = sv.size() ? sv[0] - sv[sv.size() - 1] : 0.0;
    return {std::acos(std::min(1.0, std::max(0.0, c))), spread};
}

/// Builds a k-dimensional constant-angle subspace of g_alpha.
/// phi = pi/2: span{e_1, e_3, ..., e_{2k-1}} (totally real), any 1 <= k <= n-1.
/// phi in (0, pi/2): k must be even; pair j spans
///   { e_{4j-3},  cos(phi) e_{4j-2} + sin(phi) e_{4j} },
/// occupying two complex pairs per construction pair.
inline KahlerSubspace build_constant_angle_subspace(const Model& m, int k, double phi) {
    if (k < 1 || k > m.n() - 1)
        throw std::invalid_argument("build_constant_angle_subspace: need 1 <= k <= n-1");
    if (phi <= 0.0 || phi > M_PI / 2.0 + 1e-15)
        throw std::invalid_argument("build_constant_angle_subspace: angle must lie in (0, pi/2]");
    const bool real_case = std::abs(phi - M_PI / 2.0) < 1e-14;
    if (!real_case && k % 2 != 0)
        throw std::invalid_argument("build_constant_angle_subspace: k must be even for phi < pi/2");

    KahlerSubspace w;
    w.k = k;
    w.phi = phi;
    w.basis = Mat::Zero(m.dim(), k);
    if (real_case) {
        for (int j = 0; j < k; ++j) w.basis.col(j) = m.e(2 * j + 1);
    } else {
        if (4 * (k / 2) > m.galpha_dim())
            throw std::invalid_argument("build_constant_angle_subspace: k too large for this dimension");
        const double c = std::cos(phi), s = std::sin(phi);
        for (int j = 0; j < k / 2; ++j) {
            w.basis.col(2 * j) = m.e(4 * j + 1);
            w.basis.col(2 * j + 1) = c * m.e(4 * j + 2) + s * m.e(4 * j + 4);
        }
    }
    return w;
}

/// Splits J xi into the part tangent to C w-perp minus w-perp and the part in
/// w-perp: J xi = P xi + F xi with F the orthogonal projection onto w-perp.
inline std::pair<Vec, Vec> pf_decompose(const Model& m, const KahlerSubspace& w, const Vec& xi) {
    m.check_size(xi);
    const Vec Jxi = m.apply_J(xi);
    const Vec F = w.basis * (w.basis.transpose() * Jxi);
    return {Jxi - F, F};
}

} // namespace iwasawa
