#pragma once

#include "iwasawa/jacobi.hpp"
#include "iwasawa/symmetric_operator.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace iwasawa {

/// The five homogeneous-hypersurface families plus their ruled-tube variants.
/// A: tubes around totally geodesic complex subspaces of complex dimension k.
/// B: tubes around the totally geodesic real form.
/// H: horospheres.
/// S: parallels of the minimal ruled hypersurface (k = 1).
/// Wpi2 / Wphi: tubes around the ruled submanifolds W^{2n-k} with angle pi/2 / phi.
enum class Family { A, B, H, S, Wpi2, Wphi };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::A: return "A";
        case Family::B: return "B";
        case Family::H: return "H";
        case Family::S: return "S";
        case Family::Wpi2: return "Wpi2";
        case Family::Wphi: return "Wphi";
    }
    return "?";
}

struct FamilySpec {
    Family family = Family::H;
    int n = 2;
    int k = 0;          // used by A, Wpi2, Wphi
    double r = 1.0;     // unused by H
    double phi = 0.0;   // used by Wphi
};

struct SpectrumEntry {
    double value = 0.0;
    int mult = 0;
    std::string branch;   // human-readable closed form
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries;   // ascending by value
    std::string provenance;               // closed-form | jacobi-numeric | orbit-direct
};

inline void family_check(const FamilySpec& s) {
    if (s.n < 2) throw std::invalid_argument("family_spectrum: need n >= 2");
    switch (s.family) {
        case Family::A:
            if (s.k < 0 || s.k > s.n - 1) throw std::invalid_argument("family A: need 0 <= k <= n-1");
            if (s.r <= 0) throw std::invalid_argument("family A: need r > 0");
            break;
        case Family::B:
            if (s.r <= 0) throw std::invalid_argument("family B: need r > 0");
            break;
        case Family::H:
            break;
        case Family::S:
            if (s.r < 0) throw std::invalid_argument("family S: need r >= 0");
            break;
        case Family::Wpi2:
            if (s.k < 2 || s.k > s.n - 1) throw std::invalid_argument("family Wpi2: need 2 <= k <= n-1");
            if (s.r <= 0) throw std::invalid_argument("family Wpi2: need r > 0");
            break;
        case Family::Wphi:
            if (s.k < 2 || s.k > s.n - 1 || s.k % 2 != 0)
                throw std::invalid_argument("family Wphi: need even k with 2 <= k <= n-1");
            if (s.phi <= 0 || s.phi >= M_PI / 2) throw std::invalid_argument("family Wphi: need phi in (0, pi/2)");
            if (s.r <= 0) throw std::invalid_argument("family Wphi: need r > 0");
            break;
    }
}

/// Cubic reduction for the Wphi tube block: beta parameter of z^3 - 3z + beta = 0.
inline double cubic_beta(double r, double phi) {
    if (r <= 0) throw std::invalid_argument("cubic_beta: need r > 0");
    const double th = std::tanh(r / 2), se = 1.0 / std::cosh(r / 2);
    const double s = std::sin(phi);
    return 27.0 * s * s * th * th * se * se * se * se - 2.0;
}

/// Discriminant of z^3 - 3z + beta (negative iff three distinct real roots).
inline double cubic_discriminant(double beta) { return 27.0 * (beta * beta - 4.0); }

/// Coefficients {c2, c1, c0} of the degree-3 block polynomial
/// p(x) = -x^3 + c2 x^2 - c1 x + c0.
inline std::array<double, 3> char_poly(double r, double phi) {
    const double sh = std::sinh(r / 2), ch = std::cosh(r / 2);
    const double A = 1.0 / (sh * ch);           // csch * sech
    const double T = sh / ch;
    const double se = 1.0 / ch;
    const double s = std::sin(phi);
    const double c2 = 0.5 * (A + 4.0 * T);
    const double c1 = 0.25 * (2.0 * se * se + 5.0 * T * T);
    const double c0 = -0.125 * (1.0 / sh) * se * se * se * (s * s - sh * sh - 2.0 * sh * sh * sh * sh);
    return {c2, c1, c0};
}

inline double char_poly_eval(double r, double phi, double x) {
    const auto c = char_poly(r, phi);
    return -x * x * x + c[0] * x * x - c[1] * x + c[2];
}

/// The three distinct block eigenvalues, ascending. Trigonometric root form:
/// z_j = 2 cos((arccos(-beta/2) + 2 pi j)/3) solves z^3 - 3z + beta = 0 and
/// 6 lambda = coth(r/2) z + csch(r/2) sech(r/2) + 4 tanh(r/2).
/// (The sign of the last two terms follows the polynomial's trace coefficient
/// and the horosphere limit; see cubic_eigenvalues_u_form for the cross-check.)
inline std::array<double, 3> cubic_eigenvalues(double r, double phi) {
    const double beta = cubic_beta(r, phi);
    if (cubic_discriminant(beta) >= 0)
        throw std::domain_error("cubic_eigenvalues: non-negative discriminant, roots not distinct");
    const double sh = std::sinh(r / 2), ch = std::cosh(r / 2);
    const double C = ch / sh, A = 1.0 / (sh * ch), T = sh / ch;
    std::array<double, 3> lam;
    for (int j = 0; j < 3; ++j) {
        const double z = 2.0 * std::cos((std::acos(-beta / 2.0) + 2.0 * M_PI * j) / 3.0);
        lam[j] = (C * z + A + 4.0 * T) / 6.0;
    }
    std::sort(lam.begin(), lam.end());
    return lam;
}

/// Cross-check route through the complex cube roots u of (beta + sqrt(beta^2-4))/2:
/// z = -(u + 1/u). With |u| = 1 this is -2 cos(arg u); same linear map as above.
inline std::array<double, 3> cubic_eigenvalues_u_form(double r, double phi) {
    const double beta = cubic_beta(r, phi);
    const double mod = std::sqrt(std::max(0.0, 4.0 - beta * beta));
    const double psi = std::atan2(mod, beta);   // argument of (beta + i sqrt(4-beta^2))/2
    const double sh = std::sinh(r / 2), ch = std::cosh(r / 2);
    const double C = ch / sh, A = 1.0 / (sh * ch), T = sh / ch;
    std::array<double, 3> lam;
    for (int j = 0; j < 3; ++j) {
        const double u_plus_inv = 2.0 * std::cos((psi + 2.0 * M_PI * j) / 3.0);
        lam[j] = (-C * u_plus_inv + A + 4.0 * T) / 6.0;
    }
    std::sort(lam.begin(), lam.end());
    return lam;
}

/// One closed-form eigenvalue branch: fixed symbolic label, value at the
/// configured parameters, tabulated multiplicity (and its symbolic form).
struct FamilyBranch {
    std::string name;        // closed-form label, stable across r
    std::string mult_name;   // multiplicity as a formula in n, k
    double value = 0.0;
    int mult = 0;
};

/// Branches in a fixed canonical order per family (declaration order of the
/// catalog), unsorted and unmerged, so sweeps can track each branch through
/// crossings. Family A multiplicities are stored verbatim from the table; the
/// Jacobi computation assigns them the other way around (see compare_spectra
/// flags and the verification suite).
inline std::vector<FamilyBranch> family_branches(const FamilySpec& s) {
    family_check(s);
    const double th2 = std::tanh(s.r / 2);
    const double co2 = 1.0 / th2;
    std::vector<FamilyBranch> out;
    auto add = [&](std::string name, double v, int mult, std::string mult_name) {
        if (mult > 0) out.push_back({std::move(name), std::move(mult_name), v, mult});
    };
    switch (s.family) {
        case Family::A:
            add("tanh(r/2)/2", 0.5 * th2, 2 * (s.n - s.k - 1), "2(n-k-1)");
            add("coth(r/2)/2", 0.5 * co2, 2 * s.k, "2k");
            add("coth(r)", 1.0 / std::tanh(s.r), 1, "1");
            break;
        case Family::B:
            add("tanh(r/2)/2", 0.5 * th2, s.n - 1, "n-1");
            add("coth(r/2)/2", 0.5 * co2, s.n - 1, "n-1");
            add("tanh(r)", std::tanh(s.r), 1, "1");
            break;
        case Family::H:
            add("1/2", 0.5, 2 * s.n - 2, "2n-2");
            add("1", 1.0, 1, "1");
            break;
        case Family::S: {
            const double root = 0.5 * std::sqrt(1.0 - 0.75 * th2 * th2);
            add("3tanh(r/2)/4 - sqrt(1-3tanh^2(r/2)/4)/2", 0.75 * th2 - root, 1, "1");
            add("3tanh(r/2)/4 + sqrt(1-3tanh^2(r/2)/4)/2", 0.75 * th2 + root, 1, "1");
            add("tanh(r/2)/2", 0.5 * th2, 2 * s.n - 3, "2n-3");
            break;
        }
        case Family::Wpi2: {
            const double root = 0.5 * std::sqrt(1.0 - 0.75 * th2 * th2);
            add("3tanh(r/2)/4 - sqrt(1-3tanh^2(r/2)/4)/2", 0.75 * th2 - root, 1, "1");
            add("3tanh(r/2)/4 + sqrt(1-3tanh^2(r/2)/4)/2", 0.75 * th2 + root, 1, "1");
            add("tanh(r/2)/2", 0.5 * th2, 2 * s.n - s.k - 2, "2n-k-2");
            add("coth(r/2)/2", 0.5 * co2, s.k - 1, "k-1");
            break;
        }
        case Family::Wphi: {
            const auto lam = cubic_eigenvalues(s.r, s.phi);
            add("cubic root 1", lam[0], 1, "1");
            add("cubic root 2", lam[1], 1, "1");
            add("cubic root 3", lam[2], 1, "1");
            add("tanh(r/2)/2", 0.5 * th2, 2 * s.n - s.k - 2, "2n-k-2");
            add("coth(r/2)/2", 0.5 * co2, s.k - 2, "k-2");
            break;
        }
    }
    return out;
}

/// Closed-form catalog spectrum: the branches sorted ascending by value.
inline SpectrumReport family_spectrum(const FamilySpec& s) {
    SpectrumReport rep;
    rep.provenance = "closed-form";
    for (const auto& b : family_branches(s)) rep.entries.push_back({b.value, b.mult, b.name});
    std::sort(rep.entries.begin(), rep.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
    // degenerate radii (e.g. tanh(r/2) = 1/sqrt(3)) merge branches
    std::vector<SpectrumEntry> merged;
    for (auto& e : rep.entries) {
        if (!merged.empty() &&
            std::abs(e.value - merged.back().value) <=
                1e-8 * std::max(1.0, std::abs(merged.back().value))) {
            SpectrumEntry& b = merged.back();
            b.value = (b.value * b.mult + e.value * e.mult) / (b.mult + e.mult);
            b.mult += e.mult;
            b.branch += " = " + e.branch;
        } else {
            merged.push_back(std::move(e));
        }
    }
    rep.entries = std::move(merged);
    return rep;
}

/// The tube base behind the numeric route. Every family except H is a tube:
/// A around a totally geodesic CH^k, B around the real form, S and W around
/// the ruled submanifolds (S is the boundary case k = 1).
inline TubeBase family_tube_base(const Model& m, const FamilySpec& s) {
    switch (s.family) {
        case Family::A: return base_complex_totally_geodesic(m, s.k);
        case Family::B: return base_real_totally_geodesic(m);
        case Family::S: return base_from_w_model(build_w_model(m, 1, M_PI / 2));
        case Family::Wpi2: return base_from_w_model(build_w_model(m, s.k, M_PI / 2));
        case Family::Wphi: return base_from_w_model(build_w_model(m, s.k, s.phi));
        case Family::H: break;
    }
    throw std::invalid_argument("family_tube_base: horospheres are not tubes");
}

/// Independent route to the same spectrum: eigenvalue clusters of the tube
/// (or orbit) shape operator. Families A, B, S, Wpi2 and Wphi go through the
/// Jacobi-field propagation; H is a direct orbit computation.
inline SpectrumReport family_numeric_spectrum(const FamilySpec& s, double rel_tol = 1e-8) {
    family_check(s);
    const Model m(s.n);
    SpectrumReport rep;
    std::vector<EigenCluster> clusters;
    if (s.family == Family::H) {
        clusters = horosphere_shape_operator(m).clusters(rel_tol);
        rep.provenance = "orbit-direct";
    } else {
        clusters =
            tube_operator(tube_shape_operator(m, family_tube_base(m, s), s.r)).clusters(rel_tol);
        rep.provenance = "jacobi-numeric";
    }
    for (const auto& c : clusters) rep.entries.push_back({c.value, c.mult, "numeric"});
    return rep;
}

/// Number of distinct principal curvatures after clustering.
inline int distinct_count(const SpectrumReport& rep, double rel_tol = 1e-8) {
    Vec vals(rep.entries.size());
    for (size_t i = 0; i < rep.entries.size(); ++i) vals[static_cast<int>(i)] = rep.entries[i].value;
    // cluster by value only; multiplicities do not matter for the count
    return static_cast<int>(cluster_eigenvalues(vals, rel_tol).size());
}

struct SpectrumDiff {
    double max_value_diff = 0.0;        // multiset comparison, expanded by multiplicity
    bool multiplicity_mismatch = false; // same values, different multiplicity assignment
    std::string detail;
};

/// Compares two spectra with multiplicities. Values are matched as sorted
/// multisets; a multiplicity mismatch with matching value sets is reported
/// separately so table-vs-computed discrepancies surface as flags, not errors.
inline SpectrumDiff compare_spectra(const SpectrumReport& a, const SpectrumReport& b, double tol) {
    auto expand = [](const SpectrumReport& r) {
        std::vector<double> v;
        for (const auto& e : r.entries)
            for (int i = 0; i < e.mult; ++i) v.push_back(e.value);
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto va = expand(a), vb = expand(b);
    if (va.size() != vb.size())
        throw std::invalid_argument("compare_spectra: total multiplicities differ");
    SpectrumDiff d;
    for (size_t i = 0; i < va.size(); ++i)
        d.max_value_diff = std::max(d.max_value_diff, std::abs(va[i] - vb[i]));

    if (d.max_value_diff > tol) {
        // check whether the distinct value sets still agree (pure multiplicity swap)
        auto distinct = [&](const std::vector<double>& v) {
            std::vector<double> out;
            for (double x : v)
                if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
            return out;
        };
        const auto da = distinct(va), db = distinct(vb);
        bool same_values = da.size() == db.size();
        if (same_values)
            for (size_t i = 0; i < da.size(); ++i)
                if (std::abs(da[i] - db[i]) > tol) same_values = false;
        if (same_values) {
            d.multiplicity_mismatch = true;
            d.detail = "distinct values agree; multiplicity assignment differs";
        }
    }
    return d;
}

/// Radius at which the two ruled-tube branches of the pi/2 family merge:
/// tanh(r/2) = 1/sqrt(3).
inline double special_radius() { return std::log(2.0 + std::sqrt(3.0)); }

} // namespace iwasawa
