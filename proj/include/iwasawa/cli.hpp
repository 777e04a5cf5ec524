#pragma once

#include "iwasawa/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace iwasawa::cli {

/// Exit codes: 0 success, 1 verification failure, 2 usage error.
struct RunConfig {
    std::string command;
    Family family = Family::Wphi;
    int n = 3;
    int k = 2;
    double phi = M_PI / 4;
    double r = 1.0;
    double r_min = 0.1;
    double r_max = 5.0;
    int steps = 100;
    std::optional<double> tol;
    uint64_t seed = 42;
    std::string format = "md";
    std::string output;   // empty = stdout
};

namespace detail {

using json = nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline Family family_from_string(const std::string& s) {
    if (s == "A") return Family::A;
    if (s == "B") return Family::B;
    if (s == "H") return Family::H;
    if (s == "S") return Family::S;
    if (s == "Wpi2") return Family::Wpi2;
    if (s == "Wphi") return Family::Wphi;
    throw std::invalid_argument("unknown family: " + s);
}

template <typename Fn>
int with_output(const RunConfig& cfg, std::ostream& out, std::ostream& err, Fn&& fn) {
    if (cfg.output.empty()) return fn(out);
    std::ofstream file(cfg.output);
    if (!file) {
        err << "error: cannot open output file " << cfg.output << "\n";
        return 2;
    }
    return fn(file);
}

struct TableRow {
    FamilySpec spec;
    std::string params;
    std::string note;
};

/// One representative row per admissible family: k = 1 stands in for the
/// complex-base tubes, k = 2 for the ruled-tube families (smallest admissible
/// values), so the rendered table has the catalog's shape for every n.
inline std::vector<TableRow> table_rows(int n, double r, double phi) {
    std::vector<TableRow> rows;
    rows.push_back({{Family::A, n, 1, r, 0.0},
                    "k=1",
                    "admissible 0 <= k <= n-1; two distinct curvatures if k = 0 or k = n-1"});
    rows.push_back({{Family::B, n, 0, r, 0.0}, "", "two distinct curvatures at r = ln(2+sqrt 3)"});
    rows.push_back({{Family::H, n, 0, r, 0.0}, "", "r-independent"});
    rows.push_back({{Family::S, n, 0, r, 0.0},
                    "",
                    "equidistants of the minimal ruled hypersurface (k = 1)"});
    if (n >= 3) {
        rows.push_back({{Family::Wpi2, n, 2, r, 0.0},
                        "k=2",
                        "admissible 2 <= k <= n-1; branches 2 and 4 merge at r = ln(2+sqrt 3)"});
        rows.push_back({{Family::Wphi, n, 2, r, phi},
                        "k=2, phi=" + fmt17(phi),
                        "admissible even k, 2 <= k <= n-1; four distinct curvatures if k = 2"});
    }
    return rows;
}

inline int cmd_table(const RunConfig& cfg, std::ostream& os) {
    const auto rows = table_rows(cfg.n, cfg.r, cfg.phi);
    if (cfg.format == "md") {
        os << "# curvature table: n=" << cfg.n << ", r=" << fmt17(cfg.r) << "\n";
        os << "| family | parameters | eigenvalue | value | multiplicity | count | notes |\n";
        os << "| --- | --- | --- | --- | --- | --- | --- |\n";
        for (const auto& row : rows) {
            bool first = true;
            for (const auto& b : family_branches(row.spec)) {
                os << "| " << family_name(row.spec.family) << " | " << row.params << " | "
                   << b.name << " | " << fmt17(b.value) << " | " << b.mult_name << " | "
                   << b.mult << " | " << (first ? row.note : "") << " |\n";
                first = false;
            }
        }
    } else if (cfg.format == "csv") {
        os << "family,n,k,phi,r,branch,value,mult_formula,mult\n";
        for (const auto& row : rows)
            for (const auto& b : family_branches(row.spec))
                os << family_name(row.spec.family) << "," << row.spec.n << "," << row.spec.k
                   << "," << fmt17(row.spec.phi) << "," << fmt17(row.spec.r) << "," << b.name
                   << "," << fmt17(b.value) << "," << b.mult_name << "," << b.mult << "\n";
    } else {
        json doc;
        doc["n"] = cfg.n;
        doc["r"] = cfg.r;
        doc["families"] = json::array();
        for (const auto& row : rows) {
            json fam;
            fam["family"] = family_name(row.spec.family);
            fam["n"] = row.spec.n;
            fam["k"] = row.spec.k;
            fam["phi"] = row.spec.phi;
            fam["r"] = row.spec.r;
            fam["note"] = row.note;
            fam["branches"] = json::array();
            for (const auto& b : family_branches(row.spec)) {
                json jb;
                jb["eigenvalue"] = b.name;
                jb["value"] = b.value;
                jb["multiplicity"] = b.mult_name;
                jb["count"] = b.mult;
                fam["branches"].push_back(jb);
            }
            doc["families"].push_back(fam);
        }
        os << doc.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& os) {
    if (cfg.steps < 0) throw std::invalid_argument("sweep: need steps >= 0");
    if (cfg.steps > 0 && cfg.r_max < cfg.r_min)
        throw std::invalid_argument("sweep: need r-max >= r-min");
    FamilySpec probe{cfg.family, cfg.n, cfg.k, cfg.steps > 0 ? cfg.r_min : 1.0, cfg.phi};
    family_check(probe);
    const auto branches0 = family_branches(probe);
    const size_t m = branches0.size();

    os << "r";
    for (size_t i = 1; i <= m; ++i) os << ",lambda_closed_" << i;
    for (size_t i = 1; i <= m; ++i) os << ",lambda_numeric_" << i;
    os << ",max_diff\n";

    for (int step = 0; step < cfg.steps; ++step) {
        const double r = cfg.steps == 1
                             ? cfg.r_min
                             : cfg.r_min + step * (cfg.r_max - cfg.r_min) / (cfg.steps - 1);
        const FamilySpec s{cfg.family, cfg.n, cfg.k, r, cfg.phi};
        const auto branches = family_branches(s);
        const SpectrumReport numeric = family_numeric_spectrum(s);
        os << fmt17(r);
        for (const auto& b : branches) os << "," << fmt17(b.value);
        for (const auto& b : branches) {
            double best = numeric.entries.front().value;
            for (const auto& e : numeric.entries)
                if (std::abs(e.value - b.value) < std::abs(best - b.value)) best = e.value;
            os << "," << fmt17(best);
        }
        os << "," << fmt17(compare_spectra(family_spectrum(s), numeric, 1e-9).max_value_diff)
           << "\n";
    }
    return 0;
}

inline HopfProjection hopf_for(const FamilySpec& s) {
    const Model m(s.n);
    if (s.family == Family::H) {
        const SymmetricOperator op = horosphere_shape_operator(m);
        TubeData t;
        t.basis = op.basis;
        t.S = op.matrix;
        t.xi = m.B();
        return hopf_projection_report(m, t);
    }
    return hopf_projection_report(m, tube_shape_operator(m, family_tube_base(m, s), s.r));
}

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& os) {
    const FamilySpec s{cfg.family, cfg.n, cfg.k, cfg.r, cfg.phi};
    family_check(s);
    const SpectrumReport closed = family_spectrum(s);
    const SpectrumReport numeric = family_numeric_spectrum(s);
    const HopfProjection hopf = hopf_for(s);
    const SpectrumDiff diff = compare_spectra(closed, numeric, 1e-9);

    if (cfg.format == "md") {
        os << "# spectrum: family " << family_name(s.family) << ", n=" << s.n << ", k=" << s.k
           << ", r=" << fmt17(s.r) << ", phi=" << fmt17(s.phi) << "\n";
        os << "closed form (provenance: " << closed.provenance << ")\n";
        for (const auto& e : closed.entries)
            os << "  " << fmt17(e.value) << " x" << e.mult << "  [" << e.branch << "]\n";
        os << "numeric (provenance: " << numeric.provenance << ")\n";
        for (const auto& e : numeric.entries) os << "  " << fmt17(e.value) << " x" << e.mult << "\n";
        os << "hopf direction weight by eigenvalue cluster\n";
        for (size_t i = 0; i < hopf.clusters.size(); ++i)
            os << "  " << fmt17(hopf.clusters[i].value) << " x" << hopf.clusters[i].mult
               << "  weight " << fmt17(hopf.weight[i]) << "\n";
        os << "max multiset difference: " << fmt17(diff.max_value_diff) << "\n";
        os << "multiplicity mismatch: " << (diff.multiplicity_mismatch ? "yes" : "no") << "\n";
    } else if (cfg.format == "csv") {
        os << "kind,value,mult,label\n";
        for (const auto& e : closed.entries)
            os << "closed," << fmt17(e.value) << "," << e.mult << "," << e.branch << "\n";
        for (const auto& e : numeric.entries)
            os << "numeric," << fmt17(e.value) << "," << e.mult << ",\n";
        for (size_t i = 0; i < hopf.clusters.size(); ++i)
            os << "hopf," << fmt17(hopf.clusters[i].value) << "," << hopf.clusters[i].mult << ","
               << fmt17(hopf.weight[i]) << "\n";
    } else {
        json doc;
        doc["family"] = family_name(s.family);
        doc["n"] = s.n;
        doc["k"] = s.k;
        doc["r"] = s.r;
        doc["phi"] = s.phi;
        auto dump_report = [](const SpectrumReport& rep) {
            json jr;
            jr["provenance"] = rep.provenance;
            jr["entries"] = json::array();
            for (const auto& e : rep.entries) {
                json je;
                je["value"] = e.value;
                je["mult"] = e.mult;
                je["branch"] = e.branch;
                jr["entries"].push_back(je);
            }
            return jr;
        };
        doc["closed"] = dump_report(closed);
        doc["numeric"] = dump_report(numeric);
        doc["hopf"] = json::array();
        for (size_t i = 0; i < hopf.clusters.size(); ++i) {
            json jh;
            jh["value"] = hopf.clusters[i].value;
            jh["mult"] = hopf.clusters[i].mult;
            jh["weight"] = hopf.weight[i];
            doc["hopf"].push_back(jh);
        }
        doc["max_diff"] = diff.max_value_diff;
        doc["multiplicity_mismatch"] = diff.multiplicity_mismatch;
        os << doc.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& os) {
    VerifyOptions opt;
    opt.seed = cfg.seed;
    opt.tol_override = cfg.tol;
    const std::vector<CheckResult> checks = run_all_checks(opt);

    int n_pass = 0, n_fail = 0, n_flag = 0;
    for (const auto& c : checks) {
        if (c.status == "pass") ++n_pass;
        else if (c.status == "fail") ++n_fail;
        else ++n_flag;
    }

    json doc;
    doc["seed"] = cfg.seed;
    if (cfg.tol) doc["tolerance-override"] = *cfg.tol;
    else doc["tolerance-override"] = nullptr;
    doc["checks"] = json::array();
    for (const auto& c : checks) {
        json jc;
        jc["check-id"] = c.id;
        jc["ref"] = c.ref;
        jc["residual"] = c.residual;
        jc["tolerance"] = c.tolerance;
        jc["status"] = c.status;
        jc["detail"] = c.detail;
        doc["checks"].push_back(jc);
    }
    doc["summary"] = {{"pass", n_pass}, {"fail", n_fail}, {"flagged", n_flag}};
    os << doc.dump(2) << "\n";
    return n_fail == 0 ? 0 : 1;
}

} // namespace detail

/// Parses argv-style arguments (without the program name) and runs one
/// subcommand. Normal output goes to `out` unless --output redirects it to a
/// file; diagnostics go to `err`.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    if (const char* env = std::getenv("IWASAWA_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (...) {
            err << "warning: ignoring non-numeric IWASAWA_SEED\n";
        }
    }

    CLI::App app{"spectra of homogeneous hypersurfaces in complex hyperbolic space"};
    app.name("iwasawa");
    app.require_subcommand(1);

    std::string family_str;
    bool phi_deg = false;
    double tol_value = 0.0;
    const std::vector<std::string> formats = {"md", "csv", "json"};
    const std::vector<std::string> families = {"A", "B", "H", "S", "Wpi2", "Wphi"};

    auto* table = app.add_subcommand("table", "one catalog row per admissible family at fixed n");
    table->add_option("--n", cfg.n, "complex dimension of the ambient space")->capture_default_str();
    table->add_option("--r", cfg.r, "tube radius for the numeric column")->capture_default_str();
    table->add_option("--phi", cfg.phi, "angle for the Wphi row")->capture_default_str();
    table->add_flag("--phi-deg", phi_deg, "interpret --phi in degrees");
    table->add_option("--format", cfg.format, "md, csv or json")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    table->add_option("--output", cfg.output, "write to file instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "closed-form vs numeric eigenvalues over a radius grid (CSV)");
    sweep->add_option("--family", family_str, "A, B, H, S, Wpi2 or Wphi")
        ->required()
        ->check(CLI::IsMember(families));
    sweep->add_option("--n", cfg.n, "complex dimension")->capture_default_str();
    sweep->add_option("--k", cfg.k, "base dimension parameter")->capture_default_str();
    sweep->add_option("--phi", cfg.phi, "angle for family Wphi")->capture_default_str();
    sweep->add_flag("--phi-deg", phi_deg, "interpret --phi in degrees");
    sweep->add_option("--r-min", cfg.r_min, "first radius")->capture_default_str();
    sweep->add_option("--r-max", cfg.r_max, "last radius")->capture_default_str();
    sweep->add_option("--steps", cfg.steps, "number of rows (0 emits the header only)")
        ->capture_default_str();
    sweep->add_option("--output", cfg.output, "write to file instead of stdout");

    auto* spectrum = app.add_subcommand("spectrum", "full report for one family configuration");
    spectrum->add_option("--family", family_str, "A, B, H, S, Wpi2 or Wphi")
        ->required()
        ->check(CLI::IsMember(families));
    spectrum->add_option("--n", cfg.n, "complex dimension")->capture_default_str();
    spectrum->add_option("--k", cfg.k, "base dimension parameter")->capture_default_str();
    spectrum->add_option("--phi", cfg.phi, "angle for family Wphi")->capture_default_str();
    spectrum->add_flag("--phi-deg", phi_deg, "interpret --phi in degrees");
    spectrum->add_option("--r", cfg.r, "tube radius")->capture_default_str();
    spectrum->add_option("--format", cfg.format, "md, csv or json")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    spectrum->add_option("--output", cfg.output, "write to file instead of stdout");

    auto* verify = app.add_subcommand("verify", "run the verification suite, emit a JSON report");
    auto* tol_opt = verify->add_option("--tol", tol_value, "override every check tolerance");
    verify->add_option("--seed", cfg.seed, "seed for the randomized checks")->capture_default_str();
    verify->add_option("--output", cfg.output, "write to file instead of stdout");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (phi_deg) cfg.phi *= M_PI / 180.0;
        if (!family_str.empty()) cfg.family = detail::family_from_string(family_str);
        if (tol_opt->count() > 0) cfg.tol = tol_value;

        if (table->parsed())
            return detail::with_output(cfg, out, err, [&](std::ostream& os) {
                return detail::cmd_table(cfg, os);
            });
        if (sweep->parsed())
            return detail::with_output(cfg, out, err, [&](std::ostream& os) {
                return detail::cmd_sweep(cfg, os);
            });
        if (spectrum->parsed())
            return detail::with_output(cfg, out, err, [&](std::ostream& os) {
                return detail::cmd_spectrum(cfg, os);
            });
        if (verify->parsed())
            return detail::with_output(cfg, out, err, [&](std::ostream& os) {
                return detail::cmd_verify(cfg, os);
            });
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace iwasawa::cli
