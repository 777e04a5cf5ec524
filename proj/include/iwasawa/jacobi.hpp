#pragma once

#include "iwasawa/orbits.hpp"

#include <Eigen/LU>

namespace iwasawa {

/// Jacobi field along the unit-speed geodesic gamma_xi, expressed in the
/// parallel frame identified with the tangent space at the base point. The
/// field J gamma' is parallel, so the equation 4 zeta'' = zeta + 3 <J xi, zeta> J xi
/// decouples: frequency 1 on the J xi axis, frequency 1/2 off it.
struct JacobiField {
    Vec jxi;          // unit axis vector
    Vec perp_c;       // coefficient of cosh(t/2) off the axis
    Vec perp_s;       // coefficient of 2 sinh(t/2) off the axis
    double ax_c = 0;  // coefficient of cosh(t) on the axis
    double ax_s = 0;  // coefficient of sinh(t) on the axis

    Vec eval(double t) const {
        return std::cosh(t / 2) * perp_c + 2 * std::sinh(t / 2) * perp_s +
               (ax_c * std::cosh(t) + ax_s * std::sinh(t)) * jxi;
    }
    Vec deriv(double t) const {
        return 0.5 * std::sinh(t / 2) * perp_c + std::cosh(t / 2) * perp_s +
               (ax_c * std::sinh(t) + ax_s * std::cosh(t)) * jxi;
    }
};

inline JacobiField solve_jacobi(const Model& m, const Vec& xi, const Vec& z0, const Vec& z0p) {
    m.check_size(xi);
    m.check_size(z0);
    m.check_size(z0p);
    if (std::abs(xi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("solve_jacobi: geodesic direction must be unit");
    JacobiField f;
    f.jxi = m.apply_J(xi);
    f.ax_c = f.jxi.dot(z0);
    f.ax_s = f.jxi.dot(z0p);
    f.perp_c = z0 - f.ax_c * f.jxi;
    f.perp_s = z0p - f.ax_s * f.jxi;
    return f;
}

/// RK4 oracle for the same equation, integrating 4 zeta'' = zeta + 3 <J xi, zeta> J xi
/// as a first-order system without using the frequency split.
inline std::vector<std::pair<Vec, Vec>> solve_jacobi_rk4(const Model& m, const Vec& xi,
                                                         const Vec& z0, const Vec& z0p,
                                                         double T, int nsteps) {
    const Vec jxi = m.apply_J(xi);
    const int d = m.dim();
    Vec y(2 * d);
    y.head(d) = z0;
    y.tail(d) = z0p;
    auto f = [&](const Vec& s) {
        Vec r(2 * d);
        r.head(d) = s.tail(d);
        const Vec z = s.head(d);
        r.tail(d) = 0.25 * (z + 3.0 * jxi.dot(z) * jxi);
        return r;
    };
    const double h = T / nsteps;
    std::vector<std::pair<Vec, Vec>> out;
    out.reserve(nsteps + 1);
    out.emplace_back(z0, z0p);
    for (int i = 0; i < nsteps; ++i) {
        const Vec k1 = f(y);
        const Vec k2 = f(y + 0.5 * h * k1);
        const Vec k3 = f(y + 0.5 * h * k2);
        const Vec k4 = f(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.emplace_back(y.head(d), y.tail(d));
    }
    return out;
}

/// Base manifold descriptor for the tube construction: orthonormal tangent
/// columns with the shape operator wrt xi, plus the normal columns (xi first).
struct TubeBase {
    Mat tangent;       // 2n x dim(base)
    Mat shape;         // shape operator matrix in the tangent basis, wrt xi
    Mat normal;        // 2n x codim, first column = xi
    Vec xi;
};

/// Bases for the five geometries the tube machinery is exercised on.

/// Totally geodesic complex subspace of complex dimension k (point when k = 0).
inline TubeBase base_complex_totally_geodesic(const Model& m, int k) {
    if (k < 0 || k > m.n() - 1)
        throw std::invalid_argument("base_complex_totally_geodesic: need 0 <= k <= n-1");
    TubeBase b;
    if (k == 0) {
        b.tangent = Mat(m.dim(), 0);
        b.shape = Mat(0, 0);
        b.normal = Mat(m.dim(), m.dim());
        b.normal.col(0) = m.e(1);
        int c = 1;
        b.normal.col(c++) = m.B();
        for (int j = 2; j <= m.galpha_dim(); ++j) b.normal.col(c++) = m.e(j);
        b.normal.col(c++) = m.Z();
    } else {
        b.tangent = Mat(m.dim(), 2 * k);
        b.tangent.col(0) = m.B();
        for (int j = 1; j <= 2 * k - 2; ++j) b.tangent.col(j) = m.e(j);
        b.tangent.col(2 * k - 1) = m.Z();
        b.shape = Mat::Zero(2 * k, 2 * k);
        b.normal = Mat(m.dim(), m.dim() - 2 * k);
        for (int j = 0; j < m.dim() - 2 * k; ++j) b.normal.col(j) = m.e(2 * k - 1 + j);
    }
    b.xi = b.normal.col(0);
    return b;
}

/// Totally geodesic real form: span{B, e_1, e_3, ...} tangent, odd axes.
inline TubeBase base_real_totally_geodesic(const Model& m) {
    TubeBase b;
    b.tangent = Mat(m.dim(), m.n());
    b.tangent.col(0) = m.B();
    for (int j = 0; j < m.n() - 1; ++j) b.tangent.col(1 + j) = m.e(2 * j + 1);
    b.shape = Mat::Zero(m.n(), m.n());
    b.normal = Mat(m.dim(), m.n());
    for (int j = 0; j < m.n() - 1; ++j) b.normal.col(j) = m.e(2 * j + 2);
    b.normal.col(m.n() - 1) = m.Z();
    b.xi = b.normal.col(0);
    return b;
}

/// Ruled submanifold base W^{2n-k}_phi with the distinguished normal direction.
/// The tangent columns are reordered adapted to the tube blocks:
/// (Z, P xi/sin phi, B, rest); normals as (xi, F xi/cos phi when phi < pi/2, rest).
inline TubeBase base_from_w_model(const WModel& w, int xi_index = 0) {
    const Model& m = w.model;
    if (xi_index < 0 || xi_index >= w.k)
        throw std::invalid_argument("base_from_w_model: normal index out of range");
    const Vec xi = w.wperp.col(xi_index);
    const Vec pbar = w.dbasis * (w.Pk * Vec::Unit(w.k, xi_index)) / std::sin(w.phi);
    // pbar = P xi / sin(phi) expressed through the compressed map; matches dbasis
    // column when the basis came from this xi.

    const int td = static_cast<int>(w.tangent.cols());
    Mat tcols(m.dim(), td);
    tcols.col(0) = m.Z();
    tcols.col(1) = pbar / pbar.norm();
    // complete with the remaining tangent directions orthogonal to {Z, pbar}
    Mat projt = Mat::Identity(m.dim(), m.dim()) - tcols.col(0) * tcols.col(0).transpose() -
                tcols.col(1) * tcols.col(1).transpose();
    Eigen::JacobiSVD<Mat> svdt(projt * w.tangent, Eigen::ComputeThinU);
    tcols.rightCols(td - 2) = svdt.matrixU().leftCols(td - 2);

    TubeBase b;
    b.tangent = tcols;
    b.xi = xi;

    SymmetricOperator S = singular_shape_operator(w, xi);
    // re-express the shape matrix in the adapted basis
    const Mat change = w.tangent.transpose() * tcols;
    b.shape = change.transpose() * S.matrix * change;

    Mat ncols(m.dim(), w.k);
    ncols.col(0) = xi;
    if (w.k > 1) {
        const bool real_case = std::abs(w.phi - M_PI / 2.0) < 1e-14;
        int filled = 1;
        if (!real_case) {
            const Vec fbar = w.wperp * (w.Fk * Vec::Unit(w.k, xi_index)) / std::cos(w.phi);
            ncols.col(1) = fbar / fbar.norm();
            filled = 2;
        }
        if (w.k > filled) {
            Mat projn = w.wperp * w.wperp.transpose();
            for (int i = 0; i < filled; ++i) projn -= ncols.col(i) * ncols.col(i).transpose();
            Eigen::JacobiSVD<Mat> svdn(projn * w.wperp, Eigen::ComputeThinU);
            ncols.rightCols(w.k - filled) = svdn.matrixU().leftCols(w.k - filled);
        }
    }
    b.normal = ncols;
    return b;
}

/// Tube shape operator data at radius r: D, D', S = D' D^{-1} with respect to
/// the inward radial direction, built from closed-form Jacobi fields over an
/// orthonormal basis of the orthogonal complement of xi.
struct TubeData {
    Mat basis;        // 2n x (2n-1): parallel-frame labels of the domain
    Mat D, Dp, S;
    Vec xi;
    double cond = 0.0;           // condition estimate of D
    double symmetry_residual = 0.0;
};

inline TubeData tube_shape_operator(const Model& m, const TubeBase& base, double r) {
    if (r < 0.0) throw std::invalid_argument("tube_shape_operator: radius must be >= 0");
    const int td = static_cast<int>(base.tangent.cols());
    const int nd = static_cast<int>(base.normal.cols()) - 1;
    const int d = td + nd;
    if (d != m.dim() - 1) throw std::invalid_argument("tube_shape_operator: base dimensions inconsistent");
    // Normal-type initial conditions vanish at r = 0, so D(0) is singular for
    // genuine tubes; parallel hypersurfaces (nd == 0) are fine at r = 0.
    if (nd > 0 && r <= 0.0)
        throw std::invalid_argument("tube_shape_operator: tube radius must be positive");

    Mat cols(m.dim(), d);
    std::vector<JacobiField> fields;
    fields.reserve(d);
    for (int i = 0; i < td; ++i) {
        cols.col(i) = base.tangent.col(i);
        const Vec X = base.tangent.col(i);
        const Vec SX = base.tangent * (base.shape * Vec::Unit(td, i));
        fields.push_back(solve_jacobi(m, base.xi, X, Vec(-SX)));
    }
    for (int i = 0; i < nd; ++i) {
        cols.col(td + i) = base.normal.col(1 + i);
        fields.push_back(solve_jacobi(m, base.xi, m.zero(), Vec(base.normal.col(1 + i))));
    }

    TubeData t;
    t.basis = cols;
    t.xi = base.xi;
    t.D = Mat(d, d);
    t.Dp = Mat(d, d);
    for (int i = 0; i < d; ++i) {
        t.D.col(i) = cols.transpose() * fields[i].eval(r);
        t.Dp.col(i) = cols.transpose() * fields[i].deriv(r);
    }
    Eigen::PartialPivLU<Mat> lu(t.D);
    t.S = t.Dp * lu.inverse();
    t.cond = t.D.cwiseAbs().maxCoeff() * lu.inverse().cwiseAbs().maxCoeff();
    t.symmetry_residual = (t.S - t.S.transpose()).cwiseAbs().maxCoeff();
    return t;
}

inline SymmetricOperator tube_operator(const TubeData& t) {
    return SymmetricOperator::from_matrix(t.S, t.basis);
}

/// Squared norms of the projections of J(radial direction) onto each eigenvalue
/// cluster of the tube operator; the radial direction is -gamma'(r), which in
/// the parallel frame has components -xi.
struct HopfProjection {
    std::vector<EigenCluster> clusters;
    std::vector<double> weight;   // |proj of J nu|^2 per cluster, sums to 1
};

inline HopfProjection hopf_projection_report(const Model& m, const TubeData& t,
                                             double rel_tol = 1e-8) {
    const Vec jnu = -(t.basis.transpose() * m.apply_J(t.xi));
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (t.S + t.S.transpose()));
    const Vec vals = es.eigenvalues();
    const Mat vecs = es.eigenvectors();
    HopfProjection h;
    h.clusters = cluster_eigenvalues(vals, rel_tol);
    for (const auto& c : h.clusters) {
        double wsum = 0.0;
        for (int j = 0; j < vals.size(); ++j)
            if (std::abs(vals[j] - c.value) <= rel_tol * std::max(1.0, std::abs(c.value)) + 1e-14)
                wsum += std::pow(vecs.col(j).dot(jnu), 2);
        h.weight.push_back(wsum);
    }
    return h;
}

} // namespace iwasawa
