#include "iwasawa/model.hpp"

#include "helpers.hpp"
#include <catch2/catch_amalgamated.hpp>

using namespace iwasawa;
using testutil::make_rng;
using testutil::rand_vec;

TEST_CASE("model construction validates dimension", "[model]") {
    CHECK_THROWS_AS(make_model(1), std::invalid_argument);
    CHECK_THROWS_AS(make_model(0), std::invalid_argument);
    const Model m(3);
    CHECK(m.dim() == 6);
    CHECK(m.galpha_dim() == 4);
}

TEST_CASE("complex structure is orthogonal with J^2 = -1 and JB = Z", "[model]") {
    for (int n : {2, 3, 4, 6}) {
        const Model m(n);
        const Mat J = m.J_matrix();
        CHECK((J * J + Mat::Identity(m.dim(), m.dim())).cwiseAbs().maxCoeff() == 0.0);
        CHECK((J.transpose() * J - Mat::Identity(m.dim(), m.dim())).cwiseAbs().maxCoeff() == 0.0);
        CHECK((m.apply_J(m.B()) - m.Z()).norm() == 0.0);
        CHECK((m.apply_J(m.e(1)) - m.e(2)).norm() == 0.0);
    }
}

TEST_CASE("structure constants", "[model]") {
    const Model m(3);
    CHECK((m.bracket(m.B(), m.Z()) - m.Z()).norm() == 0.0);
    CHECK((m.bracket(m.B(), m.e(1)) - 0.5 * m.e(1)).norm() == 0.0);
    CHECK((m.bracket(m.e(1), m.e(2)) - m.Z()).norm() == 0.0);
    CHECK(m.bracket(m.e(1), m.e(3)).norm() == 0.0);
    CHECK(m.bracket(m.Z(), m.e(1)).norm() == 0.0);
}

TEST_CASE("bracket is antisymmetric and satisfies the Jacobi identity", "[model]") {
    const Model m(4);
    auto rng = make_rng();
    for (int trial = 0; trial < 200; ++trial) {
        const Vec X = rand_vec(m, rng), Y = rand_vec(m, rng), W = rand_vec(m, rng);
        CHECK((m.bracket(X, Y) + m.bracket(Y, X)).norm() < 1e-14);
        const Vec jac = m.bracket(X, m.bracket(Y, W)) + m.bracket(Y, m.bracket(W, X)) +
                        m.bracket(W, m.bracket(X, Y));
        CHECK(jac.norm() < 1e-13);
    }
}

TEST_CASE("rho is exact at zero and matches the series", "[model]") {
    CHECK(rho(0.0) == 1.0);
    CHECK(std::abs(rho(1e-12) - (1.0 + 0.5e-12)) < 1e-15);
    CHECK(std::abs(rho(1.0) - (std::exp(1.0) - 1.0)) < 1e-15);
    CHECK(std::abs(rho(-2.0) - (1.0 - std::exp(-2.0)) / 2.0) < 1e-15);
    // both branches agree with the exact ratio next to the cutoff
    for (double s : {0.9999999e-4, 1.0000001e-4, -0.9999999e-4, -1.0000001e-4})
        CHECK(std::abs(rho(s) - std::expm1(s) / s) < 1e-15);
}

TEST_CASE("group operations", "[model]") {
    const Model m(3);
    auto rng = make_rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto rand_g = [&]() {
        GroupElement g;
        g.a = d(rng);
        g.u = Vec(m.galpha_dim());
        for (int i = 0; i < m.galpha_dim(); ++i) g.u[i] = d(rng);
        g.x = d(rng);
        return g;
    };
    auto dist = [&](const GroupElement& g, const GroupElement& h) {
        return std::abs(g.a - h.a) + (g.u - h.u).norm() + std::abs(g.x - h.x);
    };

    for (int trial = 0; trial < 100; ++trial) {
        const GroupElement g = rand_g(), h = rand_g(), k = rand_g();
        CHECK(dist(m.group_multiply(m.group_multiply(g, h), k),
                   m.group_multiply(g, m.group_multiply(h, k))) < 1e-13);
        CHECK(dist(m.group_multiply(g, m.identity()), g) < 1e-15);
        CHECK(dist(m.group_multiply(m.identity(), g), g) < 1e-15);
        CHECK(dist(m.group_multiply(g, m.group_inverse(g)), m.identity()) < 1e-14);

        const Vec X = rand_vec(m, rng);
        CHECK((m.group_log(m.group_exp(X)) - X).norm() < 1e-12);
        CHECK(dist(m.group_exp(m.group_log(g)), g) < 1e-12);
    }
}

TEST_CASE("exponential closed form", "[model]") {
    const Model m(2);
    // one-parameter subgroups
    auto rng = make_rng(11);
    const Vec X = rand_vec(m, rng);
    const GroupElement e1 = m.group_exp(0.3 * X), e2 = m.group_exp(0.5 * X);
    const GroupElement both = m.group_multiply(e1, e2);
    const GroupElement direct = m.group_exp(0.8 * X);
    CHECK(std::abs(both.a - direct.a) < 1e-14);
    CHECK((both.u - direct.u).norm() < 1e-13);
    CHECK(std::abs(both.x - direct.x) < 1e-13);

    // central directions exponentiate linearly
    const GroupElement gz = m.group_exp(2.5 * m.Z());
    CHECK(gz.a == 0.0);
    CHECK(gz.u.norm() == 0.0);
    CHECK(gz.x == 2.5);

    // log of (1, 0, e-1) is B + Z
    GroupElement g;
    g.a = 1.0;
    g.u = Vec::Zero(m.galpha_dim());
    g.x = std::exp(1.0) - 1.0;
    CHECK((m.group_log(g) - (m.B() + m.Z())).norm() < 1e-14);
}
