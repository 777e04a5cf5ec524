#include "iwasawa/spectra.hpp"

#include "iwasawa/jacobi.hpp"

#include "helpers.hpp"
#include <catch2/catch_amalgamated.hpp>

using namespace iwasawa;
using testutil::make_rng;

namespace {

SpectrumReport report_from_clusters(const std::vector<EigenCluster>& cl, std::string prov) {
    SpectrumReport rep;
    rep.provenance = std::move(prov);
    for (const auto& c : cl) rep.entries.push_back({c.value, c.mult, "numeric"});
    return rep;
}

bool entries_match(const SpectrumReport& rep, std::vector<std::pair<double, int>> want,
                   double tol) {
    std::sort(want.begin(), want.end());
    if (rep.entries.size() != want.size()) return false;
    for (size_t i = 0; i < want.size(); ++i)
        if (std::abs(rep.entries[i].value - want[i].first) > tol ||
            rep.entries[i].mult != want[i].second)
            return false;
    return true;
}

int total_mult(const SpectrumReport& rep) {
    int s = 0;
    for (const auto& e : rep.entries) s += e.mult;
    return s;
}

} // namespace

TEST_CASE("admissibility", "[spectra]") {
    CHECK_THROWS_AS(family_check({Family::H, 1, 0, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::A, 3, 3, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::A, 3, 1, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::B, 3, 0, -1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::S, 3, 0, -0.1, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::Wpi2, 4, 1, 1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::Wphi, 5, 3, 1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::Wphi, 3, 2, 1.0, M_PI / 2}), std::invalid_argument);
    CHECK_THROWS_AS(family_check({Family::Wphi, 3, 2, -1.0, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(family_check({Family::S, 2, 0, 0.0, 0.0}));     // the minimal leaf itself
    CHECK_NOTHROW(family_check({Family::Wphi, 3, 2, 1.0, 0.5}));
}

TEST_CASE("beta parameter", "[spectra]") {
    CHECK(cubic_beta(1.0, 0.0) == -2.0);
    CHECK(std::abs(cubic_beta(special_radius(), M_PI / 2) - 2.0) < 1e-14);
    CHECK(std::abs(cubic_beta(80.0, 1.0) + 2.0) < 1e-12);
    CHECK_THROWS_AS(cubic_beta(0.0, 1.0), std::invalid_argument);
    // range: beta in (-2, 4 sin^2 phi - 2] with the max at tanh(r/2) = 1/sqrt(3)
    for (double phi : {0.2, 0.8, 1.4}) {
        double worst = -10.0;
        for (double r = 0.05; r <= 10.0; r += 0.05) worst = std::max(worst, cubic_beta(r, phi));
        CHECK(worst > -2.0);
        CHECK(worst <= 4.0 * std::sin(phi) * std::sin(phi) - 2.0 + 1e-12);
        CHECK(std::abs(cubic_beta(special_radius(), phi) -
                       (4.0 * std::sin(phi) * std::sin(phi) - 2.0)) < 1e-13);
    }
}

TEST_CASE("discriminant is negative on the open parameter range", "[spectra]") {
    CHECK(cubic_discriminant(2.0) == 0.0);
    CHECK(cubic_discriminant(-2.0) == 0.0);
    CHECK(cubic_discriminant(cubic_beta(1.0, M_PI / 4)) < 0.0);
    double worst = -1e9;
    for (double phi = 0.05; phi < M_PI / 2; phi += 0.05)
        for (double r = 0.05; r <= 10.0; r *= 1.25)
            worst = std::max(worst, cubic_discriminant(cubic_beta(r, phi)));
    CHECK(worst < 0.0);
}

TEST_CASE("characteristic polynomial", "[spectra]") {
    // the bracketed factor of the constant term vanishes when
    // sin^2 phi = sinh^2(r/2) + 2 sinh^4(r/2)
    const double r = 0.8;
    const double s2 = std::pow(std::sinh(r / 2), 2);
    const double phi = std::asin(std::sqrt(s2 + 2 * s2 * s2));
    CHECK(std::abs(char_poly(r, phi)[2]) < 1e-15);

    // tanh(r/2)/2 and coth(r/2)/2 are never roots
    double closest = 1e9;
    for (double p = 0.15; p < M_PI / 2; p += 0.35)
        for (double rr = 0.1; rr <= 8.0; rr *= 1.3) {
            const double th = std::tanh(rr / 2);
            closest = std::min({closest, std::abs(char_poly_eval(rr, p, 0.5 * th)),
                                std::abs(char_poly_eval(rr, p, 0.5 / th))});
        }
    CHECK(closest > 1e-10);
}

TEST_CASE("cubic eigenvalues solve the polynomial", "[spectra]") {
    auto rng = make_rng(30);
    std::uniform_real_distribution<> rdist(0.05, 8.0), pdist(0.05, M_PI / 2 - 0.05);
    for (int trial = 0; trial < 200; ++trial) {
        const double r = rdist(rng), phi = pdist(rng);
        const auto lam = cubic_eigenvalues(r, phi);
        CHECK(lam[0] < lam[1]);
        CHECK(lam[1] < lam[2]);
        for (double l : lam) CHECK(std::abs(char_poly_eval(r, phi, l)) < 1e-10);
        // trace identity against the x^2 coefficient
        CHECK(std::abs(lam[0] + lam[1] + lam[2] - char_poly(r, phi)[0]) < 1e-12);
        // the two root-extraction routes agree
        const auto lam2 = cubic_eigenvalues_u_form(r, phi);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(lam[i] - lam2[i]) < 1e-12);
    }
    CHECK_THROWS_AS(cubic_eigenvalues(special_radius(), M_PI / 2), std::domain_error);
}

TEST_CASE("cubic eigenvalues frozen case", "[spectra]") {
    // r = 1, phi = pi/4, high-precision reference
    const auto lam = cubic_eigenvalues(1.0, M_PI / 4);
    CHECK(std::abs(cubic_beta(1.0, M_PI / 4) + 0.21689185256454898398) < 1e-15);
    CHECK(std::abs(lam[0] + 0.019492190698030473807) < 1e-15);
    CHECK(std::abs(lam[1] - 0.56559715278534949252) < 1e-15);
    CHECK(std::abs(lam[2] - 1.2290474806720220434) < 1e-15);
}

TEST_CASE("catalog rows", "[spectra]") {
    const double r = 1.1;
    const double th = std::tanh(r / 2), co = 1.0 / th;

    // (A): table-verbatim multiplicities
    CHECK(entries_match(family_spectrum({Family::A, 4, 1, r, 0}),
                        {{0.5 * th, 4}, {0.5 * co, 2}, {1.0 / std::tanh(r), 1}}, 1e-15));
    CHECK(entries_match(family_spectrum({Family::A, 3, 0, r, 0}),
                        {{0.5 * th, 4}, {1.0 / std::tanh(r), 1}}, 1e-15));
    CHECK(entries_match(family_spectrum({Family::B, 3, 0, r, 0}),
                        {{0.5 * th, 2}, {0.5 * co, 2}, {std::tanh(r), 1}}, 1e-15));
    CHECK(entries_match(family_spectrum({Family::H, 4, 0, 0, 0}), {{0.5, 6}, {1.0, 1}}, 0.0));
    const double root = 0.5 * std::sqrt(1 - 0.75 * th * th);
    CHECK(entries_match(family_spectrum({Family::S, 3, 0, r, 0}),
                        {{0.75 * th - root, 1}, {0.75 * th + root, 1}, {0.5 * th, 3}}, 1e-15));
    CHECK(entries_match(family_spectrum({Family::Wpi2, 4, 3, r, 0}),
                        {{0.75 * th - root, 1}, {0.75 * th + root, 1}, {0.5 * th, 3}, {0.5 * co, 2}},
                        1e-15));
    const auto lam = cubic_eigenvalues(r, 0.9);
    CHECK(entries_match(family_spectrum({Family::Wphi, 5, 4, r, 0.9}),
                        {{lam[0], 1}, {lam[1], 1}, {lam[2], 1}, {0.5 * th, 4}, {0.5 * co, 2}},
                        1e-15));

    for (int n : {2, 3, 5}) {
        CHECK(total_mult(family_spectrum({Family::H, n, 0, 0, 0})) == 2 * n - 1);
        CHECK(total_mult(family_spectrum({Family::S, n, 0, 2.0, 0})) == 2 * n - 1);
        CHECK(total_mult(family_spectrum({Family::A, n, n - 1, 2.0, 0})) == 2 * n - 1);
    }
    CHECK_THROWS_AS(family_spectrum({Family::Wpi2, 3, 1, 1.0, 0}), std::invalid_argument);
}

TEST_CASE("distinct counts cover g in {2,3,4,5}", "[spectra]") {
    CHECK(distinct_count(family_spectrum({Family::H, 3, 0, 0, 0})) == 2);
    CHECK(distinct_count(family_spectrum({Family::A, 3, 0, 1.0, 0})) == 2);
    CHECK(distinct_count(family_spectrum({Family::A, 4, 2, 1.0, 0})) == 3);
    CHECK(distinct_count(family_spectrum({Family::B, 4, 0, 1.0, 0})) == 3);
    CHECK(distinct_count(family_spectrum({Family::S, 3, 0, 1.0, 0})) == 3);
    CHECK(distinct_count(family_spectrum({Family::Wpi2, 4, 2, 1.0, 0})) == 4);
    CHECK(distinct_count(family_spectrum({Family::Wphi, 3, 2, 1.0, M_PI / 4})) == 4);
    CHECK(distinct_count(family_spectrum({Family::Wphi, 5, 4, 1.0, M_PI / 4})) == 5);
}

TEST_CASE("degenerate radii merge", "[spectra]") {
    const double rs = special_radius();
    CHECK(std::abs(std::tanh(rs / 2) - 1.0 / std::sqrt(3.0)) < 1e-15);
    const double s3 = std::sqrt(3.0);
    CHECK(entries_match(family_spectrum({Family::Wpi2, 4, 3, rs, 0}),
                        {{0.0, 1}, {s3 / 6, 3}, {s3 / 2, 3}}, 1e-12));
    CHECK(entries_match(family_spectrum({Family::B, 3, 0, rs, 0}),
                        {{s3 / 6, 2}, {s3 / 2, 3}}, 1e-12));
    CHECK(distinct_count(family_spectrum({Family::Wpi2, 4, 3, rs, 0})) == 3);
}

TEST_CASE("all tube families tend to the horosphere spectrum", "[spectra]") {
    // r large enough for ~1e-7 convergence, small enough that the cubic's
    // beta parameter stays a safe distance above its limit -2 in doubles
    const double r = 16.0;
    const SpectrumReport horo3 = family_spectrum({Family::H, 3, 0, 0, 0});
    for (const FamilySpec s : {FamilySpec{Family::A, 3, 1, r, 0}, {Family::B, 3, 0, r, 0},
                               {Family::S, 3, 0, r, 0}, {Family::Wpi2, 3, 2, r, 0},
                               {Family::Wphi, 3, 2, r, 1.0}}) {
        const SpectrumDiff d = compare_spectra(family_spectrum(s), horo3, 1e-6);
        CHECK(d.max_value_diff <= 1e-6);
    }
}

TEST_CASE("closed form matches the tube computation", "[spectra]") {
    for (const FamilySpec s : {FamilySpec{Family::Wpi2, 4, 2, 1.3, 0},
                               {Family::Wpi2, 3, 2, 0.7, 0},
                               {Family::Wphi, 3, 2, 1.0, M_PI / 4},
                               {Family::Wphi, 5, 4, 2.0, M_PI / 6},
                               {Family::S, 3, 0, 1.7, 0}}) {
        const Model m(s.n);
        const double phi = s.family == Family::Wphi ? s.phi : M_PI / 2;
        const int k = s.family == Family::S ? 1 : s.k;
        const TubeBase base = base_from_w_model(build_w_model(m, k, phi));
        const TubeData t = tube_shape_operator(m, base, s.r);
        const SpectrumDiff d = compare_spectra(
            family_spectrum(s), report_from_clusters(tube_operator(t).clusters(), "jacobi-numeric"),
            1e-9);
        CHECK(d.max_value_diff <= 1e-9);
        CHECK_FALSE(d.multiplicity_mismatch);
    }
}

TEST_CASE("table row A disagrees with the tube computation", "[spectra]") {
    // clean multiplicity swap: both branches present with different multiplicities
    const Model m(4);
    const TubeData t = tube_shape_operator(m, base_complex_totally_geodesic(m, 1), 1.0);
    const SpectrumDiff d = compare_spectra(
        family_spectrum({Family::A, 4, 1, 1.0, 0}),
        report_from_clusters(tube_operator(t).clusters(), "jacobi-numeric"), 1e-9);
    CHECK(d.max_value_diff > 1e-3);
    CHECK(d.multiplicity_mismatch);

    CHECK_THROWS_AS(compare_spectra(family_spectrum({Family::H, 3, 0, 0, 0}),
                                    family_spectrum({Family::H, 4, 0, 0, 0}), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("comparing identical reports", "[spectra]") {
    const SpectrumReport a = family_spectrum({Family::Wpi2, 5, 3, 0.9, 0});
    const SpectrumDiff d = compare_spectra(a, a, 1e-12);
    CHECK(d.max_value_diff == 0.0);
    CHECK_FALSE(d.multiplicity_mismatch);
}
