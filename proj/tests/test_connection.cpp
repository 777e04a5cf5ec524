#include "iwasawa/connection.hpp"

#include "helpers.hpp"
#include <catch2/catch_amalgamated.hpp>

using namespace iwasawa;
using testutil::make_rng;
using testutil::rand_unit;
using testutil::rand_unit_galpha;
using testutil::rand_vec;

namespace {

/// Koszul oracle on left-invariant fields (inner products constant, all
/// derivative terms vanish): 2<nabla_X Y, W> = <[X,Y],W> - <[Y,W],X> + <[W,X],Y>.
Vec koszul(const Model& m, const Vec& X, const Vec& Y) {
    Vec out(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        const Vec W = m.basis(i);
        out[i] = 0.5 * (m.bracket(X, Y).dot(W) - m.bracket(Y, W).dot(X) + m.bracket(W, X).dot(Y));
    }
    return out;
}

} // namespace

TEST_CASE("connection matches the Koszul formula", "[connection]") {
    auto rng = make_rng(1);
    for (int n : {2, 3, 4}) {
        const Model m(n);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng);
            worst = std::max(worst, (levi_civita(m, X, Y) - koszul(m, X, Y)).norm());
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("connection is torsion-free, metric, and Kaehler", "[connection]") {
    const Model m(3);
    auto rng = make_rng(2);
    double torsion = 0.0, metric = 0.0, kaehler = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng), W = rand_vec(m, rng);
        torsion = std::max(torsion,
                           (levi_civita(m, X, Y) - levi_civita(m, Y, X) - m.bracket(X, Y)).norm());
        metric = std::max(metric,
                          std::abs(levi_civita(m, X, Y).dot(W) + Y.dot(levi_civita(m, X, W))));
        kaehler = std::max(kaehler,
                           (levi_civita(m, X, m.apply_J(Y)) - m.apply_J(levi_civita(m, X, Y))).norm());
    }
    CHECK(torsion < 1e-13);
    CHECK(metric < 1e-13);
    CHECK(kaehler < 1e-13);
}

TEST_CASE("specific covariant derivatives", "[connection]") {
    const Model m(2);
    CHECK((levi_civita(m, m.Z(), m.Z()) - m.B()).norm() == 0.0);
    CHECK((levi_civita(m, m.e(1), m.e(1)) - 0.5 * m.B()).norm() == 0.0);
    CHECK(levi_civita(m, m.B(), m.B()).norm() == 0.0);
    CHECK(levi_civita(m, m.B(), m.e(1)).norm() == 0.0);   // nabla_B kills left-invariant fields
    // nabla_X B = -X/2 - <X,Z>Z/2
    auto rng = make_rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec X = rand_vec(m, rng);
        const Vec expect = -0.5 * (X - X[0] * m.B()) - 0.5 * X[m.z_index()] * m.Z();
        CHECK((levi_civita(m, X, m.B()) - expect).norm() < 1e-14);
    }
}

TEST_CASE("curvature: closed form agrees with the connection route", "[connection]") {
    auto rng = make_rng(4);
    for (int n : {2, 3, 5}) {
        const Model m(n);
        double worst = 0.0;
        for (int trial = 0; trial < 400; ++trial) {
            const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng), W = rand_vec(m, rng);
            worst = std::max(worst, (curvature_ambient(m, X, Y, W) -
                                     curvature_from_connection(m, X, Y, W)).norm());
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("curvature symmetries", "[connection]") {
    const Model m(3);
    auto rng = make_rng(5);
    double antisym = 0.0, pairsym = 0.0, bianchi = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng),
                  W = rand_vec(m, rng), V = rand_vec(m, rng);
        antisym = std::max(antisym,
                           (curvature_ambient(m, X, Y, W) + curvature_ambient(m, Y, X, W)).norm());
        pairsym = std::max(pairsym, std::abs(curvature_ambient(m, X, Y, W).dot(V) -
                                             curvature_ambient(m, W, V, X).dot(Y)));
        bianchi = std::max(bianchi, (curvature_ambient(m, X, Y, W) + curvature_ambient(m, Y, W, X) +
                                     curvature_ambient(m, W, X, Y)).norm());
    }
    CHECK(antisym < 1e-13);
    CHECK(pairsym < 1e-13);
    CHECK(bianchi < 1e-13);
}

TEST_CASE("sectional curvature pinching", "[connection]") {
    const Model m(3);
    auto rng = make_rng(6);

    // holomorphic planes
    for (int trial = 0; trial < 100; ++trial) {
        const Vec X = rand_unit(m, rng);
        CHECK((curvature_ambient(m, X, m.apply_J(X), m.apply_J(X)) + X).norm() < 1e-12);
        CHECK(std::abs(sectional_curvature(m, X, m.apply_J(X)) + 1.0) < 1e-12);
    }
    // totally real planes
    CHECK(std::abs(sectional_curvature(m, m.B(), m.e(1)) + 0.25) < 1e-13);
    CHECK(std::abs(sectional_curvature(m, m.e(1), m.e(3)) + 0.25) < 1e-13);
    CHECK(std::abs(sectional_curvature(m, m.Z(), m.e(1)) + 0.25) < 1e-13);
    // general planes stay pinched
    for (int trial = 0; trial < 200; ++trial) {
        Vec X = rand_unit(m, rng);
        Vec Y = rand_vec(m, rng);
        Y -= Y.dot(X) * X;
        Y /= Y.norm();
        const double K = sectional_curvature(m, X, Y);
        CHECK(K <= -0.25 + 1e-12);
        CHECK(K >= -1.0 - 1e-12);
    }
}

TEST_CASE("closed-form geodesic through a horizontal direction", "[connection]") {
    const Model m(3);
    auto rng = make_rng(7);
    const Vec V = rand_unit_galpha(m, rng);

    const CurveSample at0 = geodesic_unit_galpha(m, V, 0.0);
    CHECK(std::abs(at0.point.a) < 1e-15);
    CHECK(at0.point.u.norm() < 1e-15);
    CHECK((at0.velocity - V).norm() < 1e-15);

    for (double t : {0.25, 1.0, 3.0, 5.0}) {
        const CurveSample s = geodesic_unit_galpha(m, V, t);
        CHECK(std::abs(s.velocity.norm() - 1.0) < 1e-14);
    }
    CHECK_THROWS_AS(geodesic_unit_galpha(m, 2.0 * V, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(geodesic_unit_galpha(m, m.B(), 1.0), std::invalid_argument);
}

TEST_CASE("numeric geodesic matches the closed form", "[connection]") {
    const Model m(2);
    auto rng = make_rng(8);
    const Vec V = rand_unit_galpha(m, rng);
    const auto curve = geodesic_numeric(m, V, 5.0);

    double worst_pt = 0.0, worst_vel = 0.0, worst_speed = 0.0;
    for (size_t i = 0; i < curve.size(); i += 500) {
        const auto& cs = curve[i];
        const CurveSample ref = geodesic_unit_galpha(m, V, cs.t);
        worst_pt = std::max(worst_pt, std::abs(cs.point.a - ref.point.a) +
                                          (cs.point.u - ref.point.u).norm() +
                                          std::abs(cs.point.x - ref.point.x));
        worst_vel = std::max(worst_vel, (cs.velocity - ref.velocity).norm());
        worst_speed = std::max(worst_speed, std::abs(cs.velocity.norm() - 1.0));
    }
    CHECK(worst_pt < 1e-8);
    CHECK(worst_vel < 1e-8);
    CHECK(worst_speed < 1e-9);
}

TEST_CASE("geodesic along the abelian direction is a coordinate line", "[connection]") {
    const Model m(2);
    const auto curve = geodesic_numeric(m, m.B(), 2.0, 1000);
    const auto& last = curve.back();
    CHECK(std::abs(last.point.a - 2.0) < 1e-12);
    CHECK(last.point.u.norm() < 1e-12);
    CHECK(std::abs(last.point.x) < 1e-12);
    CHECK((last.velocity - m.B()).norm() < 1e-12);
}

TEST_CASE("parallel transport preserves inner products and J gamma'", "[connection]") {
    const Model m(3);
    auto rng = make_rng(9);
    const Vec V = rand_unit_galpha(m, rng);
    const double T = 3.0;
    const int steps = 3000;
    auto vel = [&](double t) { return geodesic_unit_galpha(m, V, t).velocity; };

    // J gamma' is parallel: transporting J V must match J(gamma'(t)).
    const auto jout = parallel_transport(m, vel, m.apply_J(V), T, steps);
    CHECK((jout.back() - m.apply_J(vel(T))).norm() < 1e-9);

    // gamma' itself is parallel
    const auto vout = parallel_transport(m, vel, V, T, steps);
    CHECK((vout.back() - vel(T)).norm() < 1e-9);

    // norms and inner products are preserved
    const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng);
    const auto xout = parallel_transport(m, vel, X, T, steps);
    const auto yout = parallel_transport(m, vel, Y, T, steps);
    CHECK(std::abs(xout.back().dot(yout.back()) - X.dot(Y)) < 1e-9);

    // the radial frame field: sech(t/2) B + tanh(t/2) V stays parallel
    const auto bout = parallel_transport(m, vel, m.B(), T, steps);
    const Vec expect = (1.0 / std::cosh(T / 2)) * m.B() + std::tanh(T / 2) * V;
    CHECK((bout.back() - expect).norm() < 1e-9);
}

TEST_CASE("parallel transport along sampled curves", "[connection]") {
    const Model m(2);
    auto rng = make_rng(10);
    const Vec V = rand_unit_galpha(m, rng);
    const auto curve = geodesic_numeric(m, V, 2.0, 2000);
    const auto out = parallel_transport(m, curve, m.apply_J(V));
    CHECK((out.back() - m.apply_J(curve.back().velocity)).norm() < 1e-7);
}
