#pragma once

#include "iwasawa/ch3.hpp"
#include "iwasawa/spectra.hpp"

#include <optional>
#include <random>
#include <sstream>

namespace iwasawa {

/// One verification check. status is "pass"/"fail" for ordinary checks;
/// "flagged" marks the two known catalog discrepancies, which never count as
/// failures. Most checks pass when residual <= tolerance; checks whose ref
/// says "lower bound" pass when residual >= tolerance.
struct CheckResult {
    std::string id;
    std::string ref;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string status;
    std::string detail;
};

struct VerifyOptions {
    uint64_t seed = 42;
    std::optional<double> tol_override;   // forces every pass/fail tolerance
};

namespace detail {

class Suite {
public:
    explicit Suite(const VerifyOptions& opt) : opt_(opt), rng_(opt.seed) {}

    void upper(std::string id, std::string ref, double residual, double tol,
               std::string detail = "") {
        const double t = opt_.tol_override.value_or(tol);
        results_.push_back({std::move(id), std::move(ref), residual, t,
                            residual <= t ? "pass" : "fail", std::move(detail)});
    }
    void lower(std::string id, std::string ref, double value, double floor,
               std::string detail = "") {
        const double t = opt_.tol_override.value_or(floor);
        results_.push_back({std::move(id), std::move(ref) + " (lower bound)", value, t,
                            value >= t ? "pass" : "fail", std::move(detail)});
    }
    void flag(std::string id, std::string ref, double residual, double tol, std::string detail,
              bool as_expected) {
        results_.push_back({std::move(id), std::move(ref), residual, tol,
                            as_expected ? "flagged" : "fail", std::move(detail)});
    }

    double uniform() { return dist_(rng_); }
    Vec rand_vec(const Model& m) {
        Vec v(m.dim());
        for (int i = 0; i < m.dim(); ++i) v[i] = uniform();
        return v;
    }
    Vec rand_unit(const Model& m) {
        Vec v = rand_vec(m);
        while (v.norm() < 1e-3) v = rand_vec(m);
        return v / v.norm();
    }
    Vec rand_unit_galpha(const Model& m) {
        Vec v = rand_vec(m);
        v[0] = 0.0;
        v[m.z_index()] = 0.0;
        while (v.norm() < 1e-3) {
            v = rand_vec(m);
            v[0] = 0.0;
            v[m.z_index()] = 0.0;
        }
        return v / v.norm();
    }
    uint64_t derive_seed() { return rng_(); }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    VerifyOptions opt_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> dist_{-1.0, 1.0};
    std::vector<CheckResult> results_;
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void connection_checks(Suite& s) {
    double koszul_res = 0.0, kahler_res = 0.0;
    for (int n : {2, 3, 4}) {
        const Model m(n);
        for (int t = 0; t < 1000; ++t) {
            const Vec X = s.rand_vec(m), Y = s.rand_vec(m), W = s.rand_vec(m);
            const double two_sided = 2.0 * levi_civita(m, X, Y).dot(W);
            const double koszul = m.bracket(X, Y).dot(W) - m.bracket(Y, W).dot(X) +
                                  m.bracket(W, X).dot(Y);
            koszul_res = std::max(koszul_res, std::abs(two_sided - koszul));
            if (t < 200)
                kahler_res = std::max(
                    kahler_res, (levi_civita(m, X, m.apply_J(Y)) -
                                 m.apply_J(levi_civita(m, X, Y)))
                                    .norm());
        }
    }
    s.upper("connection/koszul", "Levi-Civita closed form vs Koszul formula", koszul_res, 1e-12);
    s.upper("connection/kahler-parallel", "complex structure parallel under the connection",
            kahler_res, 1e-13);
}

inline void curvature_checks(Suite& s) {
    double two_routes = 0.0;
    for (int n : {2, 3, 5}) {
        const Model m(n);
        for (int t = 0; t < 200; ++t) {
            const Vec X = s.rand_vec(m), Y = s.rand_vec(m), W = s.rand_vec(m);
            two_routes = std::max(two_routes, (curvature_from_connection(m, X, Y, W) -
                                               curvature_ambient(m, X, Y, W))
                                                  .cwiseAbs()
                                                  .maxCoeff());
        }
    }
    s.upper("curvature/two-routes", "curvature tensor closed form vs connection route",
            two_routes, 1e-10);

    double sect = 0.0;
    for (int n : {2, 3, 4}) {
        const Model m(n);
        for (int t = 0; t < 100; ++t) {
            const Vec X = s.rand_unit(m);
            sect = std::max(sect, std::abs(sectional_curvature(m, X, m.apply_J(X)) + 1.0));
            Vec Y = s.rand_vec(m);
            const Vec JX = m.apply_J(X);
            Y -= Y.dot(X) * X + Y.dot(JX) * JX;
            if (Y.norm() < 1e-3) continue;
            Y /= Y.norm();
            sect = std::max(sect, std::abs(sectional_curvature(m, X, Y) + 0.25));
        }
    }
    s.upper("curvature/sectional", "holomorphic -1 and totally real -1/4 pinching", sect, 1e-12);
}

inline std::vector<std::pair<int, double>> admissible_cases(int n) {
    std::vector<std::pair<int, double>> out;
    for (int k = 1; k <= n - 1; ++k) out.emplace_back(k, M_PI / 2);
    for (double phi : {M_PI / 6, M_PI / 4, M_PI / 3})
        for (int k = 2; k <= n - 1; k += 2) out.emplace_back(k, phi);
    return out;
}

inline void orbit_checks(Suite& s) {
    double spec_res = 0.0, trace_res = 0.0, rigid_res = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const Model m(n);
        for (auto [k, phi] : admissible_cases(n)) {
            const WModel w = build_w_model(m, k, phi);
            const double sp = 0.5 * std::sin(phi);
            for (int q = 0; q < 2; ++q) {
                Vec xi = w.wperp.col(0);
                if (q == 1 && k > 1) {
                    Vec coeff(k);
                    for (int i = 0; i < k; ++i) coeff[i] = s.uniform();
                    if (coeff.norm() < 1e-3) coeff[0] = 1.0;
                    xi = w.wperp * (coeff / coeff.norm());
                }
                const SymmetricOperator S = singular_shape_operator(w, xi);
                const auto cl = S.clusters();
                const std::vector<std::pair<double, int>> want = {
                    {-sp, 1}, {0.0, 2 * n - k - 2}, {sp, 1}};
                if (cl.size() != want.size()) {
                    spec_res = 1.0;
                } else {
                    for (size_t i = 0; i < cl.size(); ++i) {
                        if (cl[i].mult != want[i].second) spec_res = 1.0;
                        spec_res = std::max(spec_res, std::abs(cl[i].value - want[i].first));
                    }
                }
                trace_res = std::max(trace_res, std::abs(S.trace()));
            }
            rigid_res = std::max(rigid_res, rigidity_residual(w));
        }
    }
    s.upper("orbit/singular-spectrum", "ruled orbit spectrum {-sin(phi)/2, 0, sin(phi)/2}",
            spec_res, 1e-12);
    s.upper("orbit/minimality", "ruled orbit shape operators are trace free", trace_res, 1e-13);
    s.upper("orbit/rigidity", "second fundamental form closed form", rigid_res, 1e-13);
}

inline Mat pi2_expected_matrix(int n, int k, double r) {
    const int d = 2 * n - 1, td = 2 * n - k;
    const double th = std::tanh(r / 2), se = 1.0 / std::cosh(r / 2), co = 1.0 / th;
    Mat e = Mat::Zero(d, d);
    e(0, 0) = 0.5 * th * th * th;
    e(0, 1) = e(1, 0) = -0.5 * se * se * se;
    e(1, 1) = (1.0 + 0.5 * se * se) * th;
    for (int i = 2; i < td; ++i) e(i, i) = 0.5 * th;
    for (int i = td; i < d; ++i) e(i, i) = 0.5 * co;
    return e;
}

inline void tube_pi2_checks(Suite& s) {
    double mat_res = 0.0, eig_res = 0.0, trace_res = 0.0;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}}) {
        const Model m(n);
        const TubeBase base = base_from_w_model(build_w_model(m, k, M_PI / 2));
        for (double r : {0.3, 1.0, 2.0, 4.0}) {
            const TubeData t = tube_shape_operator(m, base, r);
            mat_res = std::max(mat_res,
                               (t.S - pi2_expected_matrix(n, k, r)).cwiseAbs().maxCoeff());
            const FamilySpec fs{Family::Wpi2, n, k, r, 0.0};
            const SpectrumDiff d =
                compare_spectra(family_spectrum(fs), family_numeric_spectrum(fs), 1e-9);
            eig_res = std::max(eig_res, d.multiplicity_mismatch ? 1.0 : d.max_value_diff);
            trace_res = std::max(
                trace_res, std::abs(t.S(0, 0) + t.S(1, 1) - 1.5 * std::tanh(r / 2)));
        }
    }
    s.upper("tube/pi2-matrix", "tube shape operator matches the displayed 2x2-plus-diagonal form",
            mat_res, 1e-10);
    s.upper("tube/pi2-eigenvalues", "tube eigenvalues match the four closed forms", eig_res,
            1e-10);
    s.upper("tube/pi2-trace", "lambda_1 + lambda_2 = (3/2) tanh(r/2)", trace_res, 1e-12);
}

inline void special_radius_checks(Suite& s) {
    const double rs = special_radius();
    const double v1 = std::sqrt(3.0) / 6.0, v2 = std::sqrt(3.0) / 2.0;
    double res = 0.0, bres = 0.0;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}, {5, 2}}) {
        const FamilySpec fs{Family::Wpi2, n, k, rs, 0.0};
        const std::vector<std::pair<double, int>> want = {
            {0.0, 1}, {v1, 2 * n - k - 2}, {v2, k}};
        for (const SpectrumReport& rep : {family_spectrum(fs), family_numeric_spectrum(fs)}) {
            if (rep.entries.size() != want.size()) {
                res = 1.0;
                continue;
            }
            for (size_t i = 0; i < want.size(); ++i) {
                if (rep.entries[i].mult != want[i].second) res = 1.0;
                res = std::max(res, std::abs(rep.entries[i].value - want[i].first));
            }
        }
    }
    const SpectrumReport b = family_spectrum({Family::B, 3, 0, rs, 0.0});
    const std::vector<std::pair<double, int>> bwant = {{v1, 2}, {v2, 3}};
    if (b.entries.size() != bwant.size()) {
        bres = 1.0;
    } else {
        for (size_t i = 0; i < bwant.size(); ++i) {
            if (b.entries[i].mult != bwant[i].second) bres = 1.0;
            bres = std::max(bres, std::abs(b.entries[i].value - bwant[i].first));
        }
    }
    s.upper("tube/special-radius", "merged spectrum {0, sqrt(3)/6, sqrt(3)/2} at r = ln(2+sqrt 3)",
            res, 1e-12);
    s.upper("tube/b-merge", "family B merge coth(r/2)/2 = tanh(r) at the special radius", bres,
            1e-12);
}

inline void cubic_checks(Suite& s) {
    double coeff_res = 0.0, root_res = 0.0, uform_res = 0.0;
    double min_neg_disc = 1e30, min_guard = 1e30;
    int count_res = 0;
    for (int n : {3, 4, 5, 6}) {
        const Model m(n);
        for (int k : {2, 4, 6}) {
            if (k > n - 1) continue;
            for (double phi : {M_PI / 6, M_PI / 4, M_PI / 3, 1.3}) {
                const TubeBase base = base_from_w_model(build_w_model(m, k, phi));
                for (int i = 0; i < 20; ++i) {
                    const double r = 0.2 + i * (4.0 - 0.2) / 19.0;
                    const TubeData t = tube_shape_operator(m, base, r);
                    const int td = 2 * n - k;
                    Mat blk(3, 3);
                    const int idx[3] = {0, 1, td};
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b) blk(a, b) = t.S(idx[a], idx[b]);
                    const double c2 = blk.trace();
                    const double c1 = blk(0, 0) * blk(1, 1) - blk(0, 1) * blk(1, 0) +
                                      blk(0, 0) * blk(2, 2) - blk(0, 2) * blk(2, 0) +
                                      blk(1, 1) * blk(2, 2) - blk(1, 2) * blk(2, 1);
                    const double c0 = blk.determinant();
                    const auto cc = char_poly(r, phi);
                    coeff_res = std::max({coeff_res, std::abs(c2 - cc[0]),
                                          std::abs(c1 - cc[1]), std::abs(c0 - cc[2])});

                    for (double lam : cubic_eigenvalues(r, phi))
                        root_res = std::max(root_res, std::abs(char_poly_eval(r, phi, lam)));
                    const auto ua = cubic_eigenvalues(r, phi);
                    const auto ub = cubic_eigenvalues_u_form(r, phi);
                    for (int j = 0; j < 3; ++j)
                        uform_res = std::max(uform_res, std::abs(ua[j] - ub[j]));

                    min_neg_disc = std::min(min_neg_disc,
                                            -cubic_discriminant(cubic_beta(r, phi)));
                    const double th2 = 0.5 * std::tanh(r / 2);
                    min_guard = std::min({min_guard, std::abs(char_poly_eval(r, phi, th2)),
                                          std::abs(char_poly_eval(r, phi, 0.25 / th2))});

                    const int want = k > 2 ? 5 : 4;
                    if (distinct_count(family_spectrum({Family::Wphi, n, k, r, phi})) != want)
                        ++count_res;
                }
            }
        }
    }
    s.upper("cubic/char-poly", "degree-3 block characteristic polynomial coefficients",
            coeff_res, 1e-9);
    s.upper("cubic/roots", "closed-form roots satisfy the block polynomial", root_res, 1e-10);
    s.upper("cubic/u-form", "trigonometric and u-substitution root forms agree", uform_res,
            1e-12);
    s.lower("cubic/discriminant", "three distinct real roots everywhere on the grid",
            min_neg_disc, 1e-6);
    s.lower("cubic/guard-roots", "tanh(r/2)/2 and coth(r/2)/2 are never roots", min_guard,
            1e-10);
    s.upper("cubic/distinct-count", "five distinct curvatures for k > 2, four for k = 2",
            static_cast<double>(count_res), 0.0);
}

inline void jacobi_checks(Suite& s) {
    const Model m(3);
    double rk4_res = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const Vec xi = s.rand_unit_galpha(m);
        const Vec z0 = s.rand_vec(m), z0p = s.rand_vec(m);
        const JacobiField f = solve_jacobi(m, xi, z0, z0p);
        const auto num = solve_jacobi_rk4(m, xi, z0, z0p, 3.0, 30000);
        for (size_t i = 0; i < num.size(); ++i) {
            const double t = 3.0 * static_cast<double>(i) / (num.size() - 1);
            rk4_res = std::max({rk4_res, (num[i].first - f.eval(t)).norm(),
                                (num[i].second - f.deriv(t)).norm()});
        }
    }
    s.upper("jacobi/rk4", "closed-form Jacobi fields vs RK4 integration", rk4_res, 1e-6);

    double ric_res = 0.0;
    const double delta = 1e-5;
    auto riccati = [&](const Model& mm, const TubeBase& base) {
        for (double r = 0.5; r <= 8.0; r *= 2.0) {
            const TubeData t = tube_shape_operator(mm, base, r);
            const TubeData tp = tube_shape_operator(mm, base, r + delta);
            const TubeData tm = tube_shape_operator(mm, base, r - delta);
            const Vec jc = t.basis.transpose() * mm.apply_J(t.xi);
            const int d = mm.dim() - 1;
            const Mat A = 0.25 * (Mat::Identity(d, d) + 3.0 * jc * jc.transpose());
            const Mat fd = (tp.S - tm.S) / (2.0 * delta);
            ric_res = std::max(ric_res, (fd - (A - t.S * t.S)).cwiseAbs().maxCoeff());
        }
    };
    riccati(m, base_from_w_model(build_w_model(m, 2, M_PI / 2)));
    riccati(m, base_from_w_model(build_w_model(m, 2, M_PI / 3)));
    riccati(m, base_complex_totally_geodesic(m, 1));
    s.upper("jacobi/riccati", "radial Riccati equation for the tube shape operator", ric_res,
            1e-6);
}

inline void geodesic_checks(Suite& s) {
    const Model m(3);
    double path_res = 0.0, speed_res = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const Vec V = s.rand_unit_galpha(m);
        const auto num = geodesic_numeric(m, V, 5.0);
        for (const CurveSample& cs : num) {
            const CurveSample cl = geodesic_unit_galpha(m, V, cs.t);
            path_res = std::max({path_res, std::abs(cs.point.a - cl.point.a),
                                 (cs.point.u - cl.point.u).norm(),
                                 std::abs(cs.point.x - cl.point.x),
                                 (cs.velocity - cl.velocity).norm()});
            speed_res = std::max(speed_res, std::abs(cs.velocity.norm() - 1.0));
        }
    }
    s.upper("geodesic/closed-vs-numeric", "horocyclic geodesics match the closed form",
            path_res, 1e-8);
    s.upper("geodesic/unit-speed", "numeric geodesics keep unit speed", speed_res, 1e-9);
}

inline void normal_bundle_checks(Suite& s) {
    double flat_res = 0.0;
    for (auto [n, k] : std::vector<std::pair<int, int>>{{3, 2}, {4, 3}, {5, 2}, {4, 2}})
        flat_res = std::max(
            flat_res, normal_curvature_scan(build_w_model(Model(n), k, M_PI / 2)).max_norm);
    s.upper("normal-bundle/flat-pi2", "normal connection flat exactly at phi = pi/2", flat_res,
            1e-13);

    double closed_res = 0.0, witness = 1e30;
    for (double phi : {M_PI / 6, M_PI / 3}) {
        const Model m(3);
        const WModel w = build_w_model(m, 2, phi);
        const Vec xi = w.wperp.col(0);
        const Vec F = w.wperp * (w.wperp.transpose() * m.apply_J(xi));
        closed_res = std::max(closed_res,
                              (normal_curvature(w, m.B(), m.Z(), xi) - 0.5 * F).norm());
        witness = std::min(witness, normal_curvature_scan(w).max_norm);
    }
    s.upper("normal-bundle/closed-form", "R-perp(B, Z) xi = F xi / 2", closed_res, 1e-13);
    s.lower("normal-bundle/witness", "non-flat witness |R-perp| = cos(phi)/2 for phi < pi/2",
            witness, 0.01);
}

inline void horosphere_checks(Suite& s) {
    double horo_res = 0.0;
    for (auto [n, k, phi] : std::vector<std::tuple<int, int, double>>{
             {2, 1, M_PI / 2}, {3, 2, M_PI / 4}, {4, 2, M_PI / 3}, {5, 4, M_PI / 6}}) {
        const DistributionResiduals dr = distribution_residuals(build_w_model(Model(n), k, phi));
        horo_res = std::max(horo_res, dr.horocycle);
    }
    s.upper("horocycle/ode", "4 nabla^2 U + U = 0 on the horocyclic directions", horo_res,
            1e-13);

    double spec_res = 0.0;
    for (int n : {2, 3, 5}) {
        const Model m(n);
        const auto cl = horosphere_shape_operator(m).clusters();
        const std::vector<std::pair<double, int>> want = {{0.5, 2 * n - 2}, {1.0, 1}};
        if (cl.size() != want.size()) {
            spec_res = 1.0;
            continue;
        }
        for (size_t i = 0; i < want.size(); ++i) {
            if (cl[i].mult != want[i].second) spec_res = 1.0;
            spec_res = std::max(spec_res, std::abs(cl[i].value - want[i].first));
        }
    }
    s.upper("horosphere/spectrum", "horosphere spectrum {1/2, 1} with multiplicities {2n-2, 1}",
            spec_res, 0.0);
}

inline void leaf_checks(Suite& s) {
    double mat_res = 0.0, gauss_res = 0.0, geo_res = 0.0;
    for (double r : {0.0, 0.3, 1.0, 2.0, 4.0}) {
        const LeafGeometryCH2 g = leaf_geometry_ch2(r);
        const double se = 1.0 / std::cosh(r / 2), th = std::tanh(r / 2);
        Mat want(2, 2);
        want << se, 0.5 * th, 0.5 * th, 0.5 * se;
        mat_res = std::max(mat_res, (g.shape - want).cwiseAbs().maxCoeff());
        gauss_res = std::max(gauss_res, std::abs(g.gauss));
        geo_res = std::max(geo_res, g.geodesic_residual);
    }
    s.upper("leaf/ch2-matrix", "hypersurface leaf 2x2 shape matrix closed form", mat_res, 1e-12);
    s.upper("leaf/ch2-gauss", "flat central leaves of the ruled hypersurface", gauss_res, 1e-12);
    s.upper("leaf/ch2-geodesic", "radial field is geodesic along the leaf", geo_res, 1e-13);
}

inline void ch3_checks(Suite& s) {
    double eqbb_res = 0.0, int_res = 0.0, dauto_res = 0.0, eauto_res = 0.0, halving = 0.0;
    for (double phi : {M_PI / 6, M_PI / 3}) {
        const Ch3Model c = make_ch3(phi);
        for (double r : {0.5, 1.5}) {
            const unsigned seed = static_cast<unsigned>(s.derive_seed() & 0xffffffu);
            const DistributionCheck full = distribution_check(c, r, 3, 1e-4, seed);
            const DistributionCheck half = distribution_check(c, r, 3, 5e-5, seed);
            eqbb_res = std::max(eqbb_res, full.eqbb);
            int_res = std::max(int_res, full.dperp_integrability);
            dauto_res = std::max(dauto_res, full.d_autoparallel);
            eauto_res = std::max(eauto_res, full.e_autoparallel);
            const double viol = std::max(
                {half.dperp_integrability - std::max(0.75 * full.dperp_integrability, 1e-8),
                 half.d_autoparallel - std::max(0.75 * full.d_autoparallel, 1e-8),
                 half.e_autoparallel - std::max(0.75 * full.e_autoparallel, 1e-8)});
            halving = std::max(halving, std::max(0.0, viol));
        }
    }
    s.upper("ch3/eqbb", "transported B field matches sech(r/2)B + tanh(r/2)xi", eqbb_res, 1e-9);
    s.upper("ch3/dperp-integrability", "finite-difference brackets of D-perp stay in D-perp",
            int_res, 5e-4);
    s.upper("ch3/d-autoparallel", "D field covariantly closed along itself", dauto_res, 5e-4);
    s.upper("ch3/e-autoparallel", "E = span{B_B, PF xi} covariantly closed", eauto_res, 5e-4);
    s.upper("ch3/fd-halving", "residuals shrink when the step is halved", halving, 0.0);

    const Ch3Model c = make_ch3(M_PI / 3);
    const Vec base = (Vec(4) << 0.15, 0.4, -0.25, 0.3).finished();
    const TubePoint tp = ch3_footpoint(c, ch3_tube_point(c, base, 2.1, 1.0), 1.0);
    const DLeafCheck lc = d_leaf_check(c, tp, 1.0, 100);
    s.upper("ch3/d-leaf-plane", "D leaves lie in the totally geodesic real plane",
            std::max(lc.plane_residual, lc.base_line_residual), 1e-6);

    double eleaf_res = 0.0;
    for (auto [phi, r] : std::vector<std::pair<double, double>>{{M_PI / 6, 1.5}, {M_PI / 3, 0.5}}) {
        const ELeafCurvature el = e_leaf_curvature(make_ch3(phi), r);
        eleaf_res = std::max(eleaf_res, std::abs(el.numeric - el.gauss));
    }
    s.upper("ch3/e-leaf-numeric", "numeric E-leaf curvature matches -(1/4)sech^2(r/2)",
            eleaf_res, 2e-5);
}

inline void spectra_consistency_checks(Suite& s) {
    double res = 0.0;
    const std::vector<FamilySpec> cases = {
        {Family::B, 3, 0, 1.2, 0.0},        {Family::B, 4, 0, 0.6, 0.0},
        {Family::H, 2, 0, 0.0, 0.0},        {Family::H, 5, 0, 0.0, 0.0},
        {Family::S, 3, 0, 1.7, 0.0},        {Family::S, 2, 0, 0.4, 0.0},
        {Family::Wpi2, 4, 2, 1.3, 0.0},     {Family::Wpi2, 3, 2, 0.7, 0.0},
        {Family::Wphi, 3, 2, 1.0, M_PI / 4}, {Family::Wphi, 5, 4, 2.0, M_PI / 6}};
    for (const FamilySpec& fs : cases) {
        const SpectrumDiff d =
            compare_spectra(family_spectrum(fs), family_numeric_spectrum(fs), 1e-9);
        res = std::max(res, d.multiplicity_mismatch ? 1.0 : d.max_value_diff);
    }
    s.upper("spectra/closed-vs-numeric",
            "catalog closed forms match the Jacobi spectra (families B, H, S, W)", res, 1e-9);
}

inline void errata_checks(Suite& s) {
    // catalog row A stores multiplicities the Jacobi computation contradicts
    {
        const FamilySpec fs{Family::A, 4, 1, 1.0, 0.0};
        const SpectrumReport cat = family_spectrum(fs);
        const SpectrumReport num = family_numeric_spectrum(fs);
        const SpectrumDiff d = compare_spectra(cat, num, 1e-9);
        std::ostringstream os;
        os << "catalog:";
        for (const auto& e : cat.entries) os << " " << fmt(e.value) << " x" << e.mult;
        os << " | jacobi:";
        for (const auto& e : num.entries) os << " " << fmt(e.value) << " x" << e.mult;
        os << " | tabulated multiplicities 2(n-k-1) on tanh(r/2)/2 and 2k on coth(r/2)/2; "
              "the tube computation assigns 2k and 2(n-k-1)";
        s.flag("errata/table-row-a",
               "catalog row A multiplicity assignment vs Jacobi tube computation",
               d.max_value_diff, 1e-9, os.str(), d.multiplicity_mismatch);
    }
    // E-leaf curvature: stated first power of sech vs Gauss-equation square
    {
        const double r = 1.0;
        const ELeafCurvature el = e_leaf_curvature(make_ch3(M_PI / 3), r);
        std::ostringstream os;
        os << "stated -(1/4)sech(r/2) = " << fmt(el.first_power)
           << " | Gauss equation -(1/4)sech^2(r/2) = " << fmt(el.gauss)
           << " | numeric leaf curvature = " << fmt(el.numeric)
           << " (agrees with the squared form)";
        const bool numeric_supports_square =
            std::abs(el.numeric - el.gauss) < std::abs(el.numeric - el.first_power);
        s.flag("errata/e-leaf-curvature", "E-leaf curvature value, first power vs square",
               std::abs(el.gauss - el.first_power), 1e-12, os.str(), numeric_supports_square);
    }
}

} // namespace detail

/// Runs the whole verification suite in a fixed deterministic order. Exactly
/// two checks report status "flagged"; they document known discrepancies
/// between the tabulated closed forms and the independent computations, and
/// do not count as failures.
inline std::vector<CheckResult> run_all_checks(const VerifyOptions& opt = {}) {
    detail::Suite s(opt);
    detail::connection_checks(s);
    detail::curvature_checks(s);
    detail::orbit_checks(s);
    detail::tube_pi2_checks(s);
    detail::special_radius_checks(s);
    detail::cubic_checks(s);
    detail::jacobi_checks(s);
    detail::geodesic_checks(s);
    detail::normal_bundle_checks(s);
    detail::horosphere_checks(s);
    detail::leaf_checks(s);
    detail::ch3_checks(s);
    detail::spectra_consistency_checks(s);
    detail::errata_checks(s);
    return s.take();
}

} // namespace iwasawa
