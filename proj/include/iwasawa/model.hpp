#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iwasawa {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// rho(s) = (e^s - 1)/s with rho(0) = 1, the Jacobian factor of the nilpotent
/// exponential. Degree-6 Taylor branch below 1e-4 keeps full precision at 0.
inline double rho(double s) {
    if (std::abs(s) < 1e-4) {
        // sum_{k=0..6} s^k/(k+1)!
        double r = 1.0 / 5040.0;
        r = r * s + 1.0 / 720.0;
        r = r * s + 1.0 / 120.0;
        r = r * s + 1.0 / 24.0;
        r = r * s + 1.0 / 6.0;
        r = r * s + 0.5;
        r = r * s + 1.0;
        return r;
    }
    return std::expm1(s) / s;
}

/// Point of the group AN in global coordinates (a, u, x): a the abelian
/// coordinate, u the 2n-2 horocyclic coordinates, x the central one.
/// Identity is (0, 0, 0).
struct GroupElement {
    double a = 0.0;
    Vec u;
    double x = 0.0;
};

/// Solvable-group model of complex hyperbolic n-space, holomorphic sectional
/// curvature -1. Algebra vectors are plain coordinate vectors in R^{2n} with
/// basis ordering (B, e_1, ..., e_{2n-2}, Z):
///   index 0          : B, unit generator of the abelian part
///   indices 1..2n-2  : e_i, the module g_alpha (Heisenberg horizontal part)
///   index 2n-1       : Z, the center g_{2alpha}
/// The metric is the dot product in these coordinates. The complex structure
/// acts by J e_{2i-1} = e_{2i} on consecutive pairs and J B = Z.
class Model {
public:
    explicit Model(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("Model: complex dimension must be >= 2, got " + std::to_string(n));
    }

    int n() const { return n_; }
    int dim() const { return 2 * n_; }        // real dimension of the space
    int galpha_dim() const { return 2 * n_ - 2; }
    int z_index() const { return 2 * n_ - 1; }

    Vec zero() const { return Vec::Zero(dim()); }
    Vec B() const { return basis(0); }
    Vec Z() const { return basis(z_index()); }
    Vec basis(int i) const {
        Vec v = zero();
        v[i] = 1.0;
        return v;
    }
    /// e_j for j in 1..2n-2
    Vec e(int j) const {
        if (j < 1 || j > galpha_dim()) throw std::invalid_argument("Model::e: index out of range");
        return basis(j);
    }

    Vec make_vector(double a, const Vec& u, double z) const {
        check_galpha_size(u);
        Vec v(dim());
        v[0] = a;
        v.segment(1, galpha_dim()) = u;
        v[z_index()] = z;
        return v;
    }
    double a_part(const Vec& X) const { return X[0]; }
    double z_part(const Vec& X) const { return X[z_index()]; }
    Vec u_part(const Vec& X) const { return X.segment(1, galpha_dim()); }

    /// J on g_alpha coordinates (length 2n-2).
    Vec apply_J_galpha(const Vec& u) const {
        check_galpha_size(u);
        Vec r(u.size());
        for (int i = 0; i + 1 < static_cast<int>(u.size()); i += 2) {
            r[i] = -u[i + 1];
            r[i + 1] = u[i];
        }
        return r;
    }

    /// Complex structure on the full algebra: JB = Z, JZ = -B, rotation pairs on g_alpha.
    Vec apply_J(const Vec& X) const {
        check_size(X);
        Vec r(dim());
        r[0] = -X[z_index()];
        r.segment(1, galpha_dim()) = apply_J_galpha(X.segment(1, galpha_dim()));
        r[z_index()] = X[0];
        return r;
    }

    Mat J_matrix() const {
        Mat J = Mat::Zero(dim(), dim());
        for (int i = 0; i < dim(); ++i) J.col(i) = apply_J(basis(i));
        return J;
    }

    /// Symplectic pairing <Ju, v> on g_alpha coordinates.
    double omega(const Vec& u, const Vec& v) const {
        check_galpha_size(u);
        check_galpha_size(v);
        double s = 0.0;
        for (int i = 0; i + 1 < static_cast<int>(u.size()); i += 2)
            s += u[i] * v[i + 1] - u[i + 1] * v[i];
        return s;
    }

    /// Lie bracket: [B,Z] = Z, [B,U] = U/2, [U,V] = <JU,V> Z.
    Vec bracket(const Vec& X, const Vec& Y) const {
        check_size(X);
        check_size(Y);
        const double a = X[0], b = Y[0];
        const auto U = X.segment(1, galpha_dim());
        const auto V = Y.segment(1, galpha_dim());
        const double x = X[z_index()], y = Y[z_index()];
        Vec r = zero();
        r.segment(1, galpha_dim()) = 0.5 * (a * V - b * U);
        r[z_index()] = a * y - b * x + omega(U, V);
        return r;
    }

    GroupElement identity() const { return GroupElement{0.0, Vec::Zero(galpha_dim()), 0.0}; }

    /// Group product in global coordinates:
    /// (a,U,x)(b,V,y) = (a+b, U + e^{a/2}V, x + e^a y + (1/2) e^{a/2} <JU,V>).
    GroupElement group_multiply(const GroupElement& g, const GroupElement& h) const {
        check_galpha_size(g.u);
        check_galpha_size(h.u);
        GroupElement r;
        r.a = g.a + h.a;
        const double ea2 = std::exp(g.a / 2.0);
        r.u = g.u + ea2 * h.u;
        r.x = g.x + std::exp(g.a) * h.x + 0.5 * ea2 * omega(g.u, h.u);
        return r;
    }

    GroupElement group_inverse(const GroupElement& g) const {
        check_galpha_size(g.u);
        GroupElement r;
        r.a = -g.a;
        r.u = -std::exp(-g.a / 2.0) * g.u;
        r.x = -std::exp(-g.a) * g.x;   // the <Ju,u> correction vanishes
        return r;
    }

    /// Lie exponential: Exp(aB + U + xZ) = (a, rho(a/2) U, rho(a) x).
    GroupElement group_exp(const Vec& X) const {
        check_size(X);
        GroupElement g;
        g.a = X[0];
        g.u = rho(g.a / 2.0) * X.segment(1, galpha_dim());
        g.x = rho(g.a) * X[z_index()];
        return g;
    }

    /// Inverse of group_exp; defined everywhere (the group is diffeomorphic to R^{2n}).
    Vec group_log(const GroupElement& g) const {
        check_galpha_size(g.u);
        Vec X(dim());
        X[0] = g.a;
        X.segment(1, galpha_dim()) = g.u / rho(g.a / 2.0);
        X[z_index()] = g.x / rho(g.a);
        return X;
    }

    void check_size(const Vec& X) const {
        if (X.size() != dim()) throw std::invalid_argument("algebra vector has wrong dimension");
    }
    void check_galpha_size(const Vec& u) const {
        if (u.size() != galpha_dim()) throw std::invalid_argument("g_alpha vector has wrong dimension");
    }

private:
    int n_;
};

inline Model make_model(int n) { return Model(n); }

} // namespace iwasawa
