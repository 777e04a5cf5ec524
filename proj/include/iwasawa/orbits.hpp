#pragma once

#include "iwasawa/connection.hpp"
#include "iwasawa/kahler.hpp"
#include "iwasawa/symmetric_operator.hpp"

#include <Eigen/SVD>

namespace iwasawa {

/// Homogeneous ruled submanifold W^{2n-k} of angle phi: orbit of the solvable
/// subgroup with algebra a + (g_alpha minus w-perp) + g_{2alpha}. Tangent basis
/// columns are ordered (B, c0 ..., d ..., Z); normal basis is w-perp.
struct WModel {
    Model model;
    int k = 0;
    double phi = 0.0;
    Mat wperp;     // 2n x k, the normal space at the base point
    Mat dbasis;    // 2n x k, unit vectors P xi / sin(phi)
    Mat c0;        // 2n x (2n-2-2k), g_alpha part of the maximal complex subspace
    Mat tangent;   // 2n x (2n-k)
    Mat Pk, Fk;    // compressed P and F on w-perp coordinates (k x k)
};

inline WModel build_w_model(const Model& m, int k, double phi) {
    WModel w{m, k, phi, {}, {}, {}, {}, {}, {}};
    KahlerSubspace ks = build_constant_angle_subspace(m, k, phi);
    w.wperp = ks.basis;

    const double sp = std::sin(phi);
    w.dbasis = Mat::Zero(m.dim(), k);
    for (int i = 0; i < k; ++i) {
        auto [P, F] = pf_decompose(m, ks, Vec(w.wperp.col(i)));
        (void)F;
        w.dbasis.col(i) = P / sp;
    }
    w.Pk = w.dbasis.transpose() * m.J_matrix() * w.wperp;
    w.Fk = w.wperp.transpose() * m.J_matrix() * w.wperp;

    // c0 = g_alpha minus (w-perp + d), by SVD of the projected-out g_alpha basis
    const int c0dim = m.galpha_dim() - 2 * k;
    Mat proj = Mat::Identity(m.dim(), m.dim()) - w.wperp * w.wperp.transpose() -
               w.dbasis * w.dbasis.transpose();
    Mat galpha(m.dim(), m.galpha_dim());
    for (int j = 1; j <= m.galpha_dim(); ++j) galpha.col(j - 1) = m.basis(j);
    Mat projected = proj * galpha;
    Eigen::JacobiSVD<Mat> svd(projected, Eigen::ComputeThinU);
    w.c0 = svd.matrixU().leftCols(c0dim);

    w.tangent = Mat(m.dim(), 2 * m.n() - k);
    w.tangent.col(0) = m.B();
    for (int j = 0; j < c0dim; ++j) w.tangent.col(1 + j) = w.c0.col(j);
    for (int j = 0; j < k; ++j) w.tangent.col(1 + c0dim + j) = w.dbasis.col(j);
    w.tangent.col(2 * m.n() - k - 1) = m.Z();
    return w;
}

namespace detail {

inline void check_in_span(const Mat& basis, const Vec& v, const char* what) {
    if ((v - basis * (basis.transpose() * v)).norm() > 1e-9 * std::max(1.0, v.norm()))
        throw std::invalid_argument(std::string(what) + ": vector not in the required subspace");
}

} // namespace detail

/// Second fundamental form at the base point: normal projection of the
/// connection on left-invariant tangent fields.
inline Vec second_fundamental_form(const WModel& w, const Vec& X, const Vec& Y) {
    detail::check_in_span(w.tangent, X, "second_fundamental_form(X)");
    detail::check_in_span(w.tangent, Y, "second_fundamental_form(Y)");
    const Vec nab = levi_civita(w.model, X, Y);
    return w.wperp * (w.wperp.transpose() * nab);
}

/// Shape operator of W for a unit normal xi, via S_xi X = -tangential(nabla_X xi).
inline SymmetricOperator singular_shape_operator(const WModel& w, const Vec& xi) {
    detail::check_in_span(w.wperp, xi, "singular_shape_operator");
    if (std::abs(xi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("singular_shape_operator: normal must be unit");
    const int d = static_cast<int>(w.tangent.cols());
    Mat M(d, d);
    for (int i = 0; i < d; ++i) {
        const Vec col = -levi_civita(w.model, Vec(w.tangent.col(i)), xi);
        M.col(i) = w.tangent.transpose() * col;
    }
    return SymmetricOperator::from_matrix(std::move(M), w.tangent);
}

/// Shape operator of the orbit of a subalgebra h through the base point, for a
/// unit normal eta, via the second-fundamental-form route <nabla_X Y, eta>.
/// Independent of the -tangential(nabla xi) route used above.
inline SymmetricOperator orbit_shape_operator(const Model& m, const Mat& h, const Vec& eta) {
    if (std::abs(eta.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("orbit_shape_operator: normal must be unit");
    if ((h.transpose() * eta).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("orbit_shape_operator: normal not orthogonal to the orbit");
    const int d = static_cast<int>(h.cols());
    Mat M(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            M(i, j) = levi_civita(m, Vec(h.col(i)), Vec(h.col(j))).dot(eta);
    return SymmetricOperator::from_matrix(std::move(M), h);
}

/// Horosphere: orbit of the full nilpotent part, unit normal B.
inline SymmetricOperator horosphere_shape_operator(const Model& m) {
    Mat h(m.dim(), m.dim() - 1);
    for (int j = 1; j <= m.galpha_dim(); ++j) h.col(j - 1) = m.basis(j);
    h.col(m.dim() - 2) = m.Z();
    return orbit_shape_operator(m, h, m.B());
}

/// Normal connection on the left-invariant normal frame.
inline Vec normal_connection(const WModel& w, const Vec& X, const Vec& N) {
    const Vec nab = levi_civita(w.model, X, N);
    return w.wperp * (w.wperp.transpose() * nab);
}

/// Curvature of the normal connection:
/// R-perp(X,Y)xi = Dp_X Dp_Y xi - Dp_Y Dp_X xi - Dp_[X,Y] xi on left-invariant frames.
inline Vec normal_curvature(const WModel& w, const Vec& X, const Vec& Y, const Vec& xi) {
    detail::check_in_span(w.tangent, X, "normal_curvature(X)");
    detail::check_in_span(w.tangent, Y, "normal_curvature(Y)");
    detail::check_in_span(w.wperp, xi, "normal_curvature(xi)");
    const Vec t1 = normal_connection(w, X, normal_connection(w, Y, xi));
    const Vec t2 = normal_connection(w, Y, normal_connection(w, X, xi));
    const Vec t3 = normal_connection(w, w.model.bracket(X, Y), xi);
    return t1 - t2 - t3;
}

/// Max of |R-perp| over basis triples; witness kept for reporting.
struct NormalCurvatureScan {
    double max_norm = 0.0;
    int xi_index = -1, ti = -1, tj = -1;
};

inline NormalCurvatureScan normal_curvature_scan(const WModel& w) {
    NormalCurvatureScan out;
    const int d = static_cast<int>(w.tangent.cols());
    for (int q = 0; q < w.k; ++q)
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                const double nrm =
                    normal_curvature(w, Vec(w.tangent.col(i)), Vec(w.tangent.col(j)),
                                     Vec(w.wperp.col(q)))
                        .norm();
                if (nrm > out.max_norm) out = {nrm, q, i, j};
            }
    return out;
}

struct DistributionResiduals {
    double c_autoparallel = 0.0;     // complex subbundle closed under the connection
    double d_integrability = 0.0;    // zero iff phi = pi/2
    double a_rp_autoparallel = 0.0;  // span{B, P xi} closed under the connection
    double horocycle = 0.0;          // 4 nabla^2 U + U = 0 for U = P xi / sin(phi)
};

inline DistributionResiduals distribution_residuals(const WModel& w) {
    const Model& m = w.model;
    DistributionResiduals r;

    // c = span{B, Z} + c0
    const int c0dim = static_cast<int>(w.c0.cols());
    Mat cbasis(m.dim(), 2 + c0dim);
    cbasis.col(0) = m.B();
    if (c0dim > 0) cbasis.block(0, 1, m.dim(), c0dim) = w.c0;
    cbasis.col(1 + c0dim) = m.Z();
    const Mat cperp = Mat::Identity(m.dim(), m.dim()) - cbasis * cbasis.transpose();
    for (int i = 0; i < cbasis.cols(); ++i)
        for (int j = 0; j < cbasis.cols(); ++j)
            r.c_autoparallel = std::max(
                r.c_autoparallel,
                (cperp * levi_civita(m, Vec(cbasis.col(i)), Vec(cbasis.col(j)))).norm());

    for (int i = 0; i < w.k; ++i)
        for (int j = i + 1; j < w.k; ++j)
            r.d_integrability =
                std::max(r.d_integrability,
                         std::abs(m.apply_J(Vec(w.dbasis.col(i))).dot(w.dbasis.col(j))));

    for (int q = 0; q < w.k; ++q) {
        Mat ab(m.dim(), 2);
        ab.col(0) = m.B();
        ab.col(1) = w.dbasis.col(q);
        const Mat abperp = Mat::Identity(m.dim(), m.dim()) - ab * ab.transpose();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.a_rp_autoparallel =
                    std::max(r.a_rp_autoparallel,
                             (abperp * levi_civita(m, Vec(ab.col(i)), Vec(ab.col(j)))).norm());

        const Vec U = w.dbasis.col(q);
        r.horocycle = std::max(
            r.horocycle, (4.0 * levi_civita(m, U, levi_civita(m, U, U)) + U).norm());
    }
    return r;
}

/// Max deviation of the second fundamental form from its closed form
/// II(X,Y) = (sin^2(phi)/2) (<Y,Z> xi_X + <X,Z> xi_Y), xi_X the w-perp vector
/// whose P-image is the d-part of X.
inline double rigidity_residual(const WModel& w) {
    const Model& m = w.model;
    const Eigen::PartialPivLU<Mat> Plu(w.Pk);
    const double s2h = 0.5 * std::sin(w.phi) * std::sin(w.phi);
    auto xi_of = [&](const Vec& X) -> Vec {
        return w.wperp * Plu.solve(w.dbasis.transpose() * X);
    };
    double res = 0.0;
    const int d = static_cast<int>(w.tangent.cols());
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const Vec X = w.tangent.col(i), Y = w.tangent.col(j);
            const Vec closed =
                s2h * (Y[m.z_index()] * xi_of(X) + X[m.z_index()] * xi_of(Y));
            const Vec nab = levi_civita(m, X, Y);
            const Vec II = w.wperp * (w.wperp.transpose() * nab);
            res = std::max(res, (II - closed).norm());
        }
    return res;
}

/// Transport with the ruled-submanifold normal connection along a curve in the
/// complex leaf: x' = -levi_civita(v(t), x) - (<v,Z>/2) J x. The generator is
/// skew, so inner products are preserved.
inline std::vector<Vec> normal_transport_ode(const Model& m, const std::function<Vec(double)>& vel,
                                             const Vec& xi0, double T, int nsteps) {
    m.check_size(xi0);
    const double h = T / nsteps;
    Vec X = xi0;
    std::vector<Vec> out;
    out.reserve(nsteps + 1);
    out.push_back(X);
    auto f = [&](double tt, const Vec& x) {
        const Vec v = vel(tt);
        return Vec(-levi_civita(m, v, x) - 0.5 * v[m.z_index()] * m.apply_J(x));
    };
    for (int i = 0; i < nsteps; ++i) {
        const double t = i * h;
        const Vec k1 = f(t, X);
        const Vec k2 = f(t + h / 2, X + 0.5 * h * k1);
        const Vec k3 = f(t + h / 2, X + 0.5 * h * k2);
        const Vec k4 = f(t + h, X + h * k3);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(X);
    }
    return out;
}

/// Geometry of the central 2-plane distribution span{Z, J xi} on the leaf at
/// distance r from the minimal ruled hypersurface in complex dimension 2.
struct LeafGeometryCH2 {
    Eigen::Matrix2d shape;      // wrt the in-leaf unit normal sech(r/2) B + tanh(r/2) xi
    double gauss = 0.0;         // intrinsic curvature via the Gauss equation
    double geodesic_residual = 0.0;  // tangential acceleration of the normal's integral curve
};

inline LeafGeometryCH2 leaf_geometry_ch2(double r) {
    const Model m(2);
    const Vec xi = m.e(1);
    const Vec Jxi = m.e(2);
    const double se = 1.0 / std::cosh(r / 2.0), th = std::tanh(r / 2.0);
    const Vec eta = se * m.B() + th * xi;

    Mat leaf(m.dim(), 2);
    leaf.col(0) = m.Z();
    leaf.col(1) = Jxi;

    LeafGeometryCH2 out;
    for (int i = 0; i < 2; ++i) {
        const Vec col = -levi_civita(m, Vec(leaf.col(i)), eta);
        out.shape.col(i) = leaf.transpose() * col;
    }

    // Gauss equation with the full normal space of the leaf, span{B, xi}
    Mat nor(m.dim(), 2);
    nor.col(0) = m.B();
    nor.col(1) = xi;
    auto II = [&](const Vec& X, const Vec& Y) -> Vec {
        return nor * (nor.transpose() * levi_civita(m, X, Y));
    };
    const Vec Zv = m.Z();
    const double Kbar = sectional_curvature(m, Zv, Jxi);
    out.gauss = Kbar + II(Zv, Zv).dot(II(Jxi, Jxi)) - II(Zv, Jxi).squaredNorm();

    Mat mr(m.dim(), 3);   // tangent space of the hypersurface leaf at gamma(r)
    mr.col(0) = m.Z();
    mr.col(1) = Jxi;
    mr.col(2) = eta;
    out.geodesic_residual = (mr.transpose() * levi_civita(m, eta, eta)).norm();
    return out;
}

} // namespace iwasawa
