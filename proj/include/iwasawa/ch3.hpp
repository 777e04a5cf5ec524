#pragma once

#include "iwasawa/connection.hpp"
#include "iwasawa/orbits.hpp"

#include <functional>
#include <random>
#include <utility>

namespace iwasawa {

/// Tube geometry over the four-dimensional ruled submanifold in complex
/// hyperbolic 3-space (k = 2, Kahler angle phi strictly between 0 and pi/2).
/// The base is the orbit of the subgroup with algebra spanned by B, the
/// two-plane d and Z; its normal plane at any orbit point has the constant
/// left-invariant frame (xi_1, xi_2) = w-perp.
struct Ch3Model {
    Model m;
    WModel w;
    double phi = 0.0;
};

inline Ch3Model make_ch3(double phi) {
    if (!(phi > 0.0 && phi < M_PI / 2.0))
        throw std::invalid_argument("make_ch3: Kahler angle must lie strictly between 0 and pi/2");
    Model m(3);
    WModel w = build_w_model(m, 2, phi);
    return Ch3Model{std::move(m), std::move(w), phi};
}

/// Unit normal at angle theta in the (xi_1, xi_2) plane.
inline Vec ch3_eta(const Ch3Model& c, double theta) {
    return std::cos(theta) * Vec(c.w.wperp.col(0)) + std::sin(theta) * Vec(c.w.wperp.col(1));
}

/// Base element (a, w1 d1 + w2 d2, z) from the four subgroup coordinates.
inline GroupElement ch3_base_element(const Ch3Model& c, const Vec& s) {
    if (s.size() != 4) throw std::invalid_argument("ch3_base_element: need (a, w1, w2, z)");
    GroupElement g;
    g.a = s[0];
    g.u = s[1] * c.m.u_part(Vec(c.w.dbasis.col(0))) + s[2] * c.m.u_part(Vec(c.w.dbasis.col(1)));
    g.x = s[3];
    return g;
}

/// Point at distance r down the normal geodesic from the base point s with
/// normal angle theta.
inline GroupElement ch3_tube_point(const Ch3Model& c, const Vec& s, double theta, double r) {
    const GroupElement base = ch3_base_element(c, s);
    const GroupElement tip = geodesic_unit_galpha(c.m, ch3_eta(c, theta), r).point;
    return c.m.group_multiply(base, tip);
}

/// Footpoint data of a point near the tube: base coordinates, normal angle,
/// and the distance actually solved for.
struct TubePoint {
    Vec s = Vec::Zero(4);    // (a, w1, w2, z) of the footpoint
    double theta = 0.0;      // angle of the unit normal in the (xi_1, xi_2) frame
    double r = 0.0;          // distance from the base along the normal geodesic
    GroupElement point;      // the point itself
    GroupElement footpoint;  // base element evaluated at s
    Vec eta;                 // left-invariant components of the unit normal
    int iterations = 0;      // Newton iterations used by the solve
    double residual = 0.0;   // final coordinate residual
};

namespace detail {

inline Vec ch3_coords(const Model& m, const GroupElement& g) {
    Vec c(m.dim());
    c[0] = g.a;
    c.segment(1, m.galpha_dim()) = g.u;
    c[m.dim() - 1] = g.x;
    return c;
}

/// Closed-form inverse of the normal exponential: the group coordinates of
/// p = s . gamma_eta(r) decouple, so the seed is already exact on the tube.
///   rho:    |wperp^T u_p| = 2 e^{a_p/2} sinh(rho/2)
///   a_s:    a_p + 2 ln cosh(rho/2)
///   w_i:    d_i^T u_p          (the g_alpha offset 2 tanh(rho/2) eta is normal to d)
///   theta:  direction of wperp^T u_p
///   z:      x_p - (1/2) <J u_s, u_p>
inline void ch3_seed(const Ch3Model& c, const GroupElement& p, bool fix_r, double r_fixed,
                     Vec& s, double& theta, double& rho) {
    const Model& m = c.m;
    Vec full = m.zero();
    full.segment(1, m.galpha_dim()) = p.u;
    const Vec nc = c.w.wperp.transpose() * full;
    const Vec wc = c.w.dbasis.transpose() * full;
    if (fix_r) {
        rho = r_fixed;
    } else {
        const double sn = nc.norm() * std::exp(-p.a / 2.0) / 2.0;
        if (sn < 1e-13)
            throw std::runtime_error("ch3 footpoint: point lies on the base submanifold, "
                                     "normal direction undefined");
        rho = 2.0 * std::asinh(sn);
    }
    theta = std::atan2(nc[1], nc[0]);
    s = Vec(4);
    s[0] = p.a + 2.0 * std::log(std::cosh(rho / 2.0));
    s[1] = wc[0];
    s[2] = wc[1];
    const Vec us = s[1] * m.u_part(Vec(c.w.dbasis.col(0))) + s[2] * m.u_part(Vec(c.w.dbasis.col(1)));
    s[3] = p.x - 0.5 * m.omega(us, p.u);
}

inline TubePoint ch3_footpoint_solve(const Ch3Model& c, const GroupElement& p, bool fix_r,
                                     double r_fixed) {
    const Model& m = c.m;
    const int np = fix_r ? 5 : 6;       // (s, theta [, rho])
    Vec q(np);
    double theta, rho;
    Vec s;
    detail::ch3_seed(c, p, fix_r, r_fixed, s, theta, rho);
    q.head(4) = s;
    q[4] = theta;
    if (!fix_r) q[5] = rho;

    const Vec target = ch3_coords(m, p);
    const double scale = std::max(1.0, target.cwiseAbs().maxCoeff());
    auto residual = [&](const Vec& qq) -> Vec {
        const double rr = fix_r ? r_fixed : std::max(qq[5], 1e-8);
        return Vec(ch3_coords(m, ch3_tube_point(c, qq.head(4), qq[4], rr)) - target);
    };

    const double tol = 1e-12 * scale;
    Vec F = residual(q);
    int it = 0;
    for (; it < 50 && F.norm() > tol; ++it) {
        Mat J(m.dim(), np);
        const double hj = 1e-7;
        for (int j = 0; j < np; ++j) {
            Vec qp = q, qm = q;
            qp[j] += hj;
            qm[j] -= hj;
            J.col(j) = (residual(qp) - residual(qm)) / (2.0 * hj);
        }
        // least squares when fix_r (6 equations, 5 unknowns), square Newton otherwise
        q -= J.colPivHouseholderQr().solve(F);
        F = residual(q);
    }
    if (F.norm() > 1e-9 * scale)
        throw std::runtime_error("ch3 footpoint: no convergence, coordinate residual " +
                                 std::to_string(F.norm()) +
                                 (fix_r ? " (point off the tube of radius " +
                                              std::to_string(r_fixed) + ")"
                                        : ""));

    TubePoint tp;
    tp.s = q.head(4);
    tp.theta = q[4];
    tp.r = fix_r ? r_fixed : q[5];
    tp.point = p;
    tp.footpoint = ch3_base_element(c, tp.s);
    tp.eta = ch3_eta(c, tp.theta);
    tp.iterations = it;
    tp.residual = F.norm();
    return tp;
}

} // namespace detail

/// Footpoint of a point on the tube of radius r; Newton on the five base and
/// normal parameters, seeded by the closed-form coordinate inverse. Throws if
/// p is not on the tube (coordinate residual reported in the message).
inline TubePoint ch3_footpoint(const Ch3Model& c, const GroupElement& p, double r) {
    if (r <= 0.0) throw std::invalid_argument("ch3_footpoint: radius must be positive");
    return detail::ch3_footpoint_solve(c, p, true, r);
}

/// Footpoint with the distance as a sixth unknown; defined off the base.
inline TubePoint ch3_footpoint_free(const Ch3Model& c, const GroupElement& p) {
    return detail::ch3_footpoint_solve(c, p, false, 0.0);
}

/// Left-invariant frame attached to a tube point. bb spans D, (z, pn, pfn, fn)
/// is an orthonormal frame of D-perp, radial is the outward geodesic velocity.
/// E = span{bb, pfn}.
struct Ch3Frame {
    TubePoint tp;
    Vec eta;     // unit normal direction, g_alpha part of the normal plane
    Vec bb;      // sech(r/2) B + tanh(r/2) eta, the transported B direction
    Vec z;       // the central direction
    Vec pn;      // P eta / sin(phi)
    Vec pfn;     // P F-hat eta / sin(phi), F-hat = F / cos(phi)
    Vec fn;      // F eta / cos(phi)
    Vec radial;  // -tanh(r/2) B + sech(r/2) eta
};

inline Ch3Frame ch3_frame(const Ch3Model& c, const TubePoint& tp) {
    const Model& m = c.m;
    const double th = std::tanh(tp.r / 2.0);
    const double se = 1.0 / std::cosh(tp.r / 2.0);
    const double sp = std::sin(c.phi), cp = std::cos(c.phi);
    KahlerSubspace nu{c.w.wperp, 2, c.phi};
    Ch3Frame f;
    f.tp = tp;
    f.eta = tp.eta;
    f.bb = se * m.B() + th * tp.eta;
    f.z = m.Z();
    auto [P, F] = pf_decompose(m, nu, tp.eta);
    f.pn = P / sp;
    f.fn = F / cp;
    auto [P2, F2] = pf_decompose(m, nu, f.fn);
    (void)F2;
    f.pfn = P2 / sp;
    f.radial = -th * m.B() + se * tp.eta;
    return f;
}

/// Frame at an arbitrary point off the base, through the free-radius footpoint.
inline Ch3Frame ch3_frame_at(const Ch3Model& c, const GroupElement& q) {
    return ch3_frame(c, ch3_footpoint_free(c, q));
}

/// Two routes to the transported B direction at a tube point: the closed form
/// sech(r/2) B + tanh(r/2) eta versus numeric parallel transport of B along
/// the normal geodesic.
struct BFieldCheck {
    Vec closed;
    Vec transported;
    double diff = 0.0;
};

inline BFieldCheck frame_B_field(const Ch3Model& c, const TubePoint& tp, int nsteps = 0) {
    const Model& m = c.m;
    const Vec eta = tp.eta;
    BFieldCheck out;
    out.closed = (1.0 / std::cosh(tp.r / 2.0)) * m.B() + std::tanh(tp.r / 2.0) * eta;
    auto vel = [&](double t) -> Vec {
        return Vec(-std::tanh(t / 2.0) * m.B() + (1.0 / std::cosh(t / 2.0)) * eta);
    };
    if (nsteps <= 0) nsteps = std::max(2000, static_cast<int>(2000 * tp.r));
    out.transported = parallel_transport(m, vel, m.B(), tp.r, nsteps).back();
    out.diff = (out.closed - out.transported).norm();
    return out;
}

namespace detail {

/// Symmetric-difference derivative of a left-invariant-coordinate field along
/// the direction x at p; the curve is t -> p . Exp(t x).
template <class FieldFn>
Vec ch3_field_derivative(const Model& m, const GroupElement& p, const Vec& x, FieldFn&& y,
                         double h) {
    const GroupElement cp = m.group_multiply(p, m.group_exp(Vec(h * x)));
    const GroupElement cm = m.group_multiply(p, m.group_exp(Vec(-h * x)));
    return Vec((y(cp) - y(cm)) / (2.0 * h));
}

} // namespace detail

/// Finite-difference residuals of the distribution claims on the tube of
/// radius r, maximised over randomly sampled tube points:
///   dperp_integrability: |<[X,Y], bb>| for X,Y in the D-perp frame
///   d_autoparallel:      |D-perp part of nabla_bb bb|
///   e_autoparallel:      |(D-perp minus pfn) part of nabla_X Y| for X,Y in E
///   eqbb:                closed-form vs transported B direction
///   radius_drift:        |free-radius footpoint distance - r|
/// Brackets and covariant derivatives of the frame fields use symmetric
/// differences with step h, so the residuals scale like h (and better).
struct DistributionCheck {
    double dperp_integrability = 0.0;
    double d_autoparallel = 0.0;
    double e_autoparallel = 0.0;
    double eqbb = 0.0;
    double radius_drift = 0.0;
};

inline DistributionCheck distribution_check(const Ch3Model& c, double r, int samples, double h,
                                            unsigned seed = 1234) {
    if (r <= 0.0) throw std::invalid_argument("distribution_check: radius must be positive");
    const Model& m = c.m;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> box(-0.7, 0.7);
    std::uniform_real_distribution<double> circ(0.0, 2.0 * M_PI);

    DistributionCheck out;
    for (int trial = 0; trial < samples; ++trial) {
        Vec s0(4);
        for (int i = 0; i < 4; ++i) s0[i] = box(rng);
        const double theta0 = circ(rng);
        const GroupElement p = ch3_tube_point(c, s0, theta0, r);

        const TubePoint tp = ch3_footpoint(c, p, r);
        const Ch3Frame f = ch3_frame(c, tp);
        out.radius_drift = std::max(out.radius_drift, std::abs(ch3_footpoint_free(c, p).r - r));
        out.eqbb = std::max(out.eqbb, frame_B_field(c, tp).diff);

        // one frame evaluation per displaced point, shared across all fields
        const Vec dirs[5] = {f.z, f.pn, f.pfn, f.fn, f.bb};
        Ch3Frame plus[5], minus[5];
        for (int i = 0; i < 5; ++i) {
            plus[i] = ch3_frame_at(c, m.group_multiply(p, m.group_exp(Vec(h * dirs[i]))));
            minus[i] = ch3_frame_at(c, m.group_multiply(p, m.group_exp(Vec(-h * dirs[i]))));
        }
        auto comp = [](const Ch3Frame& fr, int which) -> const Vec& {
            switch (which) {
                case 0: return fr.z;
                case 1: return fr.pn;
                case 2: return fr.pfn;
                case 3: return fr.fn;
                default: return fr.bb;
            }
        };
        auto deriv = [&](int along, int which) {
            return Vec((comp(plus[along], which) - comp(minus[along], which)) / (2.0 * h));
        };

        // [X,Y] = [x,y] + X(y) - Y(x) on left-invariant coordinate fields
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const Vec br = m.bracket(dirs[i], dirs[j]) + deriv(i, j) - deriv(j, i);
                out.dperp_integrability =
                    std::max(out.dperp_integrability, std::abs(br.dot(f.bb)));
            }

        const Vec dbb = levi_civita(m, f.bb, f.bb) + deriv(4, 4);
        double da = 0.0;
        for (int i = 0; i < 4; ++i) da += std::pow(dbb.dot(dirs[i]), 2);
        out.d_autoparallel = std::max(out.d_autoparallel, std::sqrt(da));

        const int epair[2] = {4, 2};  // bb, pfn
        const int rest[3] = {0, 1, 3};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const Vec nab =
                    levi_civita(m, dirs[epair[a]], dirs[epair[b]]) + deriv(epair[a], epair[b]);
                double ea = 0.0;
                for (int rix : rest) ea += std::pow(nab.dot(dirs[rix]), 2);
                out.e_autoparallel = std::max(out.e_autoparallel, std::sqrt(ea));
            }
    }
    return out;
}

/// Integral curve of the D field from a tube point, with containment checks:
///   plane_residual:     distance of curve points from the totally geodesic
///                       real plane through the footpoint spanned by B and eta
///   base_line_residual: footpoints stay on the B geodesic through the
///                       original footpoint (and theta stays fixed)
///   radius_drift:       the curve stays on the tube
struct DLeafCheck {
    double plane_residual = 0.0;
    double base_line_residual = 0.0;
    double radius_drift = 0.0;
};

inline DLeafCheck d_leaf_check(const Ch3Model& c, const TubePoint& tp0, double T, int nsteps) {
    const Model& m = c.m;
    const GroupElement s0inv = m.group_inverse(tp0.footpoint);
    const Vec ueta = m.u_part(tp0.eta);

    auto rhs = [&](const GroupElement& q) {
        const Ch3Frame f = ch3_frame_at(c, q);
        Vec d(m.dim());
        double da, dx;
        Vec du;
        detail::point_derivative(m, q, f.bb, da, du, dx);
        d[0] = da;
        d.segment(1, m.galpha_dim()) = du;
        d[m.dim() - 1] = dx;
        return d;
    };
    auto unpack = [&](const Vec& y) {
        return GroupElement{y[0], y.segment(1, m.galpha_dim()), y[m.dim() - 1]};
    };

    DLeafCheck out;
    Vec y = detail::ch3_coords(m, tp0.point);
    const double hstep = T / nsteps;
    for (int i = 0; i < nsteps; ++i) {
        const Vec k1 = rhs(unpack(y));
        const Vec k2 = rhs(unpack(Vec(y + 0.5 * hstep * k1)));
        const Vec k3 = rhs(unpack(Vec(y + 0.5 * hstep * k2)));
        const Vec k4 = rhs(unpack(Vec(y + hstep * k3)));
        y += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const GroupElement q = unpack(y);
        const GroupElement rel = m.group_multiply(s0inv, q);
        const Vec uoff = rel.u - rel.u.dot(ueta) * ueta;
        out.plane_residual =
            std::max(out.plane_residual, std::sqrt(uoff.squaredNorm() + rel.x * rel.x));

        const TubePoint tq = ch3_footpoint_free(c, q);
        out.radius_drift = std::max(out.radius_drift, std::abs(tq.r - tp0.r));
        const GroupElement relf = m.group_multiply(s0inv, tq.footpoint);
        double dtheta = std::remainder(tq.theta - tp0.theta, 2.0 * M_PI);
        out.base_line_residual = std::max(
            out.base_line_residual,
            std::sqrt(relf.u.squaredNorm() + relf.x * relf.x + dtheta * dtheta));
    }
    return out;
}

/// Endpoint containment for integral curves of sections of E: the leaf of E
/// through the base point lies in the totally geodesic real 3-space through
/// the footpoint spanned by B, eta and the pfn direction.
inline double e_leaf_containment(const Ch3Model& c, const TubePoint& tp0, double T, int nsteps,
                                 int directions = 4) {
    const Model& m = c.m;
    const GroupElement s0inv = m.group_inverse(tp0.footpoint);
    const Ch3Frame f0 = ch3_frame(c, tp0);
    Mat span2(m.galpha_dim(), 2);
    span2.col(0) = m.u_part(f0.eta);
    span2.col(1) = m.u_part(f0.pfn);

    double worst = 0.0;
    for (int d = 0; d < directions; ++d) {
        const double ang = 2.0 * M_PI * d / directions + 0.37;
        auto rhs = [&](const GroupElement& q) {
            const Ch3Frame f = ch3_frame_at(c, q);
            const Vec v = std::cos(ang) * f.bb + std::sin(ang) * f.pfn;
            Vec out(m.dim());
            double da, dx;
            Vec du;
            detail::point_derivative(m, q, v, da, du, dx);
            out[0] = da;
            out.segment(1, m.galpha_dim()) = du;
            out[m.dim() - 1] = dx;
            return out;
        };
        auto unpack = [&](const Vec& y) {
            return GroupElement{y[0], y.segment(1, m.galpha_dim()), y[m.dim() - 1]};
        };
        Vec y = detail::ch3_coords(m, tp0.point);
        const double hstep = T / nsteps;
        for (int i = 0; i < nsteps; ++i) {
            const Vec k1 = rhs(unpack(y));
            const Vec k2 = rhs(unpack(Vec(y + 0.5 * hstep * k1)));
            const Vec k3 = rhs(unpack(Vec(y + 0.5 * hstep * k2)));
            const Vec k4 = rhs(unpack(Vec(y + hstep * k3)));
            y += (hstep / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const GroupElement rel = m.group_multiply(s0inv, unpack(y));
        const Vec uoff = rel.u - span2 * (span2.transpose() * rel.u);
        worst = std::max(worst, std::sqrt(uoff.squaredNorm() + rel.x * rel.x));
    }
    return worst;
}

/// Curvature of the E-leaf through a tube point, three ways. The leaf is the
/// parallel surface at distance r of a totally geodesic real plane inside a
/// totally geodesic real 3-space of curvature -1/4, so its shape operator
/// there is (1/2) tanh(r/2) Id and the Gauss equation gives
///   K = -1/4 + (1/4) tanh^2(r/2) = -(1/4) sech^2(r/2).
/// first_power is the same expression without the square; the numeric value
/// (ambient Gauss equation with finite-difference second fundamental form)
/// discriminates between the two.
struct ELeafCurvature {
    double gauss = 0.0;
    double first_power = 0.0;
    double numeric = 0.0;
};

inline ELeafCurvature e_leaf_curvature(const Ch3Model& c, double r, double h = 1e-4) {
    if (r <= 0.0) throw std::invalid_argument("e_leaf_curvature: radius must be positive");
    const Model& m = c.m;
    const double se = 1.0 / std::cosh(r / 2.0);
    ELeafCurvature out;
    out.gauss = -0.25 * se * se;
    out.first_power = -0.25 * se;

    Vec s0(4);
    s0 << 0.23, -0.41, 0.17, 0.05;
    const TubePoint tp = ch3_footpoint(c, ch3_tube_point(c, s0, 0.81, r), r);
    const Ch3Frame f = ch3_frame(c, tp);

    // leaf tangents bb, pfn; leaf normals radial, z, pn, fn (all orthonormal)
    auto field = [&](int which) {
        return [&, which](const GroupElement& q) -> Vec {
            const Ch3Frame fq = ch3_frame_at(c, q);
            return which == 0 ? fq.bb : fq.pfn;
        };
    };
    auto nabla = [&](const Vec& x, int which) {
        return Vec(levi_civita(m, x, which == 0 ? f.bb : f.pfn) +
                   detail::ch3_field_derivative(m, tp.point, x, field(which), h));
    };
    const Mat normals = [&] {
        Mat N(m.dim(), 4);
        N.col(0) = f.radial;
        N.col(1) = f.z;
        N.col(2) = f.pn;
        N.col(3) = f.fn;
        return N;
    }();
    auto normal_part = [&](const Vec& v) { return Vec(normals.transpose() * v); };

    const Vec ii_bb = normal_part(nabla(f.bb, 0));
    const Vec ii_pf = normal_part(nabla(f.pfn, 1));
    const Vec ii_mixed = normal_part(Vec(0.5 * (nabla(f.bb, 1) + nabla(f.pfn, 0))));
    out.numeric = sectional_curvature(m, f.bb, f.pfn) + ii_bb.dot(ii_pf) - ii_mixed.dot(ii_mixed);
    return out;
}

} // namespace iwasawa
