#pragma once

#include "iwasawa/model.hpp"

#include <functional>
#include <vector>

namespace iwasawa {

/// Point on a curve together with the left-invariant components of its velocity.
struct CurveSample {
    double t = 0.0;
    GroupElement point;
    Vec velocity;   // algebra components, length 2n
};

/// Levi-Civita connection on left-invariant fields, closed form:
/// nabla_{aB+U+xZ}(bB+V+yZ) = ((1/2)<U,V> + xy) B
///                            - (1/2)(b U + y JU + x JV)
///                            + ((1/2)<JU,V> - bx) Z.
inline Vec levi_civita(const Model& m, const Vec& X, const Vec& Y) {
    m.check_size(X);
    m.check_size(Y);
    const double a = X[0], b = Y[0];
    const auto U = X.segment(1, m.galpha_dim());
    const auto V = Y.segment(1, m.galpha_dim());
    const double x = X[m.z_index()], y = Y[m.z_index()];
    (void)a;
    Vec r(m.dim());
    r[0] = 0.5 * U.dot(V) + x * y;
    r.segment(1, m.galpha_dim()) =
        -0.5 * (b * U + y * m.apply_J_galpha(U) + x * m.apply_J_galpha(V));
    r[m.z_index()] = 0.5 * m.omega(U, V) - b * x;
    return r;
}

/// Curvature tensor from the closed form
/// 4 R(X,Y)W = <X,W>Y - <Y,W>X + <JX,W>JY - <JY,W>JX + 2<JX,Y>JW.
inline Vec curvature_ambient(const Model& m, const Vec& X, const Vec& Y, const Vec& W) {
    const Vec JX = m.apply_J(X), JY = m.apply_J(Y), JW = m.apply_J(W);
    return 0.25 * (X.dot(W) * Y - Y.dot(W) * X + JX.dot(W) * JY - JY.dot(W) * JX +
                   2.0 * JX.dot(Y) * JW);
}

/// Independent route: R(X,Y)W = nabla_X nabla_Y W - nabla_Y nabla_X W - nabla_{[X,Y]} W,
/// exact on left-invariant fields since all terms are algebraic.
inline Vec curvature_from_connection(const Model& m, const Vec& X, const Vec& Y, const Vec& W) {
    const Vec t1 = levi_civita(m, X, levi_civita(m, Y, W));
    const Vec t2 = levi_civita(m, Y, levi_civita(m, X, W));
    const Vec t3 = levi_civita(m, m.bracket(X, Y), W);
    return t1 - t2 - t3;
}

/// K(X,Y) = <R(X,Y)Y, X>; callers pass orthonormal pairs.
inline double sectional_curvature(const Model& m, const Vec& X, const Vec& Y) {
    return curvature_ambient(m, X, Y, Y).dot(X);
}

/// Unit-speed geodesic through the identity with initial velocity V in g_alpha:
/// gamma(t) = (ln sech^2(t/2), 2 tanh(t/2) V, 0),
/// left-invariant velocity -tanh(t/2) B + sech(t/2) V.
inline CurveSample geodesic_unit_galpha(const Model& m, const Vec& V, double t) {
    m.check_size(V);
    if (std::abs(V[0]) > 1e-12 || std::abs(V[m.z_index()]) > 1e-12)
        throw std::invalid_argument("geodesic_unit_galpha: direction must lie in g_alpha");
    if (std::abs(V.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("geodesic_unit_galpha: direction must be unit");
    const double th = std::tanh(t / 2.0);
    const double se = 1.0 / std::cosh(t / 2.0);
    CurveSample s;
    s.t = t;
    s.point.a = 2.0 * std::log(se);
    s.point.u = 2.0 * th * m.u_part(V);
    s.point.x = 0.0;
    s.velocity = -th * m.B() + se * V;
    return s;
}

namespace detail {

/// Coordinate derivative of a curve with left-invariant velocity v at point g:
/// the differential of left translation in global coordinates.
inline void point_derivative(const Model& m, const GroupElement& g, const Vec& v,
                             double& da, Vec& du, double& dx) {
    const double ea2 = std::exp(g.a / 2.0);
    da = v[0];
    du = ea2 * v.segment(1, m.galpha_dim());
    dx = std::exp(g.a) * v[m.z_index()] +
         0.5 * ea2 * m.omega(g.u, v.segment(1, m.galpha_dim()));
}

} // namespace detail

/// Numeric geodesic: classical RK4 on the exact first-order system
///   (point coordinates)' = dL_g(v),   v' = -levi_civita(v, v),
/// sampled at every step. steps_per_unit defaults to 1e4.
inline std::vector<CurveSample> geodesic_numeric(const Model& m, const Vec& X0, double T,
                                                 int steps_per_unit = 10000) {
    m.check_size(X0);
    if (T <= 0.0) throw std::invalid_argument("geodesic_numeric: horizon must be positive");
    const int nsteps = std::max(1, static_cast<int>(std::ceil(T * steps_per_unit)));
    const double h = T / nsteps;
    const int gd = m.galpha_dim();

    // state y = (a, u, x, v)
    const int vs = 2 + gd + m.dim();
    Vec y(vs);
    y[0] = 0.0;
    y.segment(1, gd).setZero();
    y[1 + gd] = 0.0;
    y.tail(m.dim()) = X0;

    auto f = [&](const Vec& s) {
        GroupElement g{s[0], s.segment(1, gd), s[1 + gd]};
        Vec v = s.tail(m.dim());
        Vec d(vs);
        double da, dx;
        Vec du;
        detail::point_derivative(m, g, v, da, du, dx);
        d[0] = da;
        d.segment(1, gd) = du;
        d[1 + gd] = dx;
        d.tail(m.dim()) = -levi_civita(m, v, v);
        return d;
    };

    std::vector<CurveSample> out;
    out.reserve(nsteps + 1);
    auto emit = [&](double t, const Vec& s) {
        CurveSample cs;
        cs.t = t;
        cs.point = GroupElement{s[0], s.segment(1, gd), s[1 + gd]};
        cs.velocity = s.tail(m.dim());
        out.push_back(std::move(cs));
    };
    emit(0.0, y);
    for (int i = 0; i < nsteps; ++i) {
        const Vec k1 = f(y);
        const Vec k2 = f(y + 0.5 * h * k1);
        const Vec k3 = f(y + 0.5 * h * k2);
        const Vec k4 = f(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        emit((i + 1) * h, y);
    }
    return out;
}

/// Parallel transport X' = -levi_civita(v(t), X) with the velocity given as a
/// callback; RK4 with nsteps over [0, T]. The generator is skew, so norms and
/// inner products are preserved up to integration error.
inline std::vector<Vec> parallel_transport(const Model& m, const std::function<Vec(double)>& vel,
                                           const Vec& X0, double T, int nsteps) {
    m.check_size(X0);
    const double h = T / nsteps;
    Vec X = X0;
    std::vector<Vec> out;
    out.reserve(nsteps + 1);
    out.push_back(X);
    for (int i = 0; i < nsteps; ++i) {
        const double t = i * h;
        auto f = [&](double tt, const Vec& x) { return Vec(-levi_civita(m, vel(tt), x)); };
        const Vec k1 = f(t, X);
        const Vec k2 = f(t + h / 2, X + 0.5 * h * k1);
        const Vec k3 = f(t + h / 2, X + 0.5 * h * k2);
        const Vec k4 = f(t + h, X + h * k3);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(X);
    }
    return out;
}

/// Transport along a sampled curve; velocities between samples are interpolated
/// linearly, so accuracy is limited by the sampling density.
inline std::vector<Vec> parallel_transport(const Model& m, const std::vector<CurveSample>& curve,
                                           const Vec& X0) {
    if (curve.size() < 2) throw std::invalid_argument("parallel_transport: need at least two samples");
    const double T = curve.back().t - curve.front().t;
    const double t0 = curve.front().t;
    auto vel = [&](double t) -> Vec {
        const double s = (t - t0) / T * (curve.size() - 1);
        const int i = std::min(static_cast<int>(curve.size()) - 2, std::max(0, static_cast<int>(s)));
        const double w = s - i;
        return (1.0 - w) * curve[i].velocity + w * curve[i + 1].velocity;
    };
    return parallel_transport(m, vel, X0, T, static_cast<int>(curve.size()) - 1);
}

} // namespace iwasawa
