// Command-line front end: generalized trigonometric tables, eigenfunction solves,
// spectral chains, s-number tables, verification suites, and blow-up reports.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqbiharm/dynamics.hpp"
#include "pqbiharm/gentrig.hpp"
#include "pqbiharm/shooting.hpp"
#include "pqbiharm/spectral.hpp"
#include "pqbiharm/version.hpp"
#include "verify_suites.hpp"

using json = nlohmann::json;
using namespace pqbiharm;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

// default output directory from the environment, applied to relative paths
std::string resolve_out(const std::string& path) {
    const char* dir = std::getenv("PQBIHARM_OUT_DIR");
    if (dir == nullptr || path.empty() || std::filesystem::path(path).is_absolute())
        return path;
    return (std::filesystem::path(dir) / path).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    return os;
}

// writes to --out when given, otherwise to stdout
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        auto os = open_out(resolve_out(out_path));
        os << text;
    }
}

CLI::Validator exceeds_one(const std::string& flag) {
    return CLI::Validator(
        [flag](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (...) {
                return "value for " + flag + " is not a number";
            }
            if (!(v > 1.0)) return "constraint violated: requires " + flag + " > 1";
            return {};
        },
        "FLOAT>1");
}

CLI::Validator positive(const std::string& flag) {
    return CLI::Validator(
        [flag](std::string& s) -> std::string {
            double v = 0.0;
            try {
                v = std::stod(s);
            } catch (...) {
                return "value for " + flag + " is not a number";
            }
            if (!(v > 0.0)) return "constraint violated: requires " + flag + " > 0";
            return {};
        },
        "FLOAT>0");
}

struct CommonOpts {
    double rtol = 1e-10;
    double atol = 1e-12;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--rtol", c.rtol, "relative integration tolerance");
    cmd->add_option("--atol", c.atol, "absolute integration tolerance");
    cmd->add_option("--out", c.out, "output path (default: stdout; relative paths land in $PQBIHARM_OUT_DIR)");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

json tolerances_json(const IntegrateOptions& opts) {
    return json{{"rtol", opts.rel_tol}, {"atol", opts.abs_tol}};
}

// ---------------------------------------------------------------------------

int cmd_gtrig(double r, double s, int points, double tmin, double tmax,
              const CommonOpts& c) {
    GenTrigParams g(r, s);
    const double period = pi_rs(g);
    if (points < 2) throw std::runtime_error("gtrig: need at least 2 points");
    if (c.format == "json") {
        json rows = json::array();
        for (int i = 0; i < points; ++i) {
            const double t = tmin + (tmax - tmin) * i / (points - 1);
            rows.push_back({{"t", t}, {"sin", sin_rs(g, t)}, {"cos", cos_rs(g, t)}});
        }
        json doc{{"r", r}, {"s", s}, {"pi_rs", period}, {"rows", rows},
                 {"version", kVersion}};
        emit(c.out, doc.dump(2) + "\n");
    } else {
        std::string text = "# pi_rs=" + num(period) + "\n";
        text += "t,sin,cos\n";
        for (int i = 0; i < points; ++i) {
            const double t = tmin + (tmax - tmin) * i / (points - 1);
            text += num(t) + "," + num(sin_rs(g, t)) + "," + num(cos_rs(g, t)) + "\n";
        }
        emit(c.out, text);
    }
    return 0;
}

int cmd_solve(double p, double q, double t0, const std::string& lambda_arg, int samples,
              const CommonOpts& c) {
    IntegrateOptions opts = shooting_defaults();
    opts.rel_tol = std::min(opts.rel_tol, c.rtol);
    opts.abs_tol = std::min(opts.abs_tol, c.atol);

    std::optional<double> lambda_target;
    if (lambda_arg != "auto") {
        const double v = std::stod(lambda_arg);
        if (!(v > 0.0)) throw std::runtime_error("solve: requires lambda > 0");
        lambda_target = v;
    }
    Eigenfunction e = solve_eigenproblem(p, q, t0, lambda_target, opts);

    // residual diagnostics for the exit status
    const double amp_scale = std::max(1.0, std::fabs(e.value(0.5 * t0)));
    const double b0 = std::fabs(e.value(0.0));
    const double b1 = std::fabs(e.value(t0));
    const double b2 = std::fabs(e.second_derivative(0.0));
    const double b3 = std::fabs(e.second_derivative(t0));
    const double npp = lq_norm([&](double t) { return e.second_derivative(t); }, t0, p);
    const double nq = lq_norm([&](double t) { return e.value(t); }, t0, q);
    const double ratio_residual =
        std::fabs(std::pow(npp, p) / std::pow(nq, q) / e.lambda() - 1.0);
    const bool ok = b0 <= 1e-9 * amp_scale && b1 <= 1e-9 * amp_scale &&
                    b2 <= 1e-9 * amp_scale && b3 <= 1e-9 * amp_scale &&
                    ratio_residual <= 1e-6;

    const std::string base = c.out.empty() ? "eigenfunction" : c.out;
    {
        auto os = open_out(resolve_out(base + ".csv"));
        e.write_csv(os, samples);
    }
    json header{{"p", p},
                {"q", q},
                {"lambda", e.lambda()},
                {"t0", t0},
                {"n", e.index()},
                {"alpha", e.slope_at_origin()},
                {"beta", e.curvature_rate_at_origin()},
                {"residuals",
                 {{"u_at_0", b0},
                  {"u_at_t0", b1},
                  {"upp_at_0", b2},
                  {"upp_at_t0", b3},
                  {"ratio_identity", ratio_residual}}},
                {"tolerances", tolerances_json(opts)},
                {"version", kVersion}};
    {
        auto os = open_out(resolve_out(base + ".json"));
        os << header.dump(2) << "\n";
    }
    if (!ok) {
        std::cerr << "solve: residuals exceed tolerance\n" << header.dump(2) << "\n";
        return 1;
    }
    std::cout << header.dump(2) << "\n";
    return 0;
}

int cmd_spectrum(double p, double q, double t0, int n_max, const CommonOpts& c) {
    SpectralCouple c1 = normalize_spectral(solve_eigenproblem(p, q, 1.0, 1.0));
    if (c.format == "json") {
        json rows = json::array();
        for (int n = 1; n <= n_max; ++n) {
            SpectralCouple cn = spectral_chain(c1, n, t0);
            rows.push_back({{"n", n},
                            {"lambda_n", std::pow(n, 2.0 * q) * c1.lambda},
                            {"sn_n", cn.lambda},
                            {"value", std::pow(cn.lambda, -1.0 / q)}});
        }
        json doc{{"p", p},           {"q", q},
                 {"t0", t0},         {"lambda1_unit", c1.lambda},
                 {"rows", rows},     {"version", kVersion}};
        emit(c.out, doc.dump(2) + "\n");
    } else {
        std::string text = "n,lambda_n,sn_n,value\n";
        for (int n = 1; n <= n_max; ++n) {
            SpectralCouple cn = spectral_chain(c1, n, t0);
            text += std::to_string(n) + "," + num(std::pow(n, 2.0 * q) * c1.lambda) + "," +
                    num(cn.lambda) + "," + num(std::pow(cn.lambda, -1.0 / q)) + "\n";
        }
        emit(c.out, text);
    }
    return 0;
}

int cmd_snumbers(double p, double q, double t0, int n_max, const CommonOpts& c) {
    auto reports = s_number_bounds(p, q, t0, n_max);
    if (c.format == "json") {
        json rows = json::array();
        for (const auto& r : reports)
            rows.push_back({{"n", r.n},
                            {"sn_n", r.sn_n},
                            {"value", r.value},
                            {"kind", to_string(r.kind)}});
        json doc{{"p", p},
                 {"q", q},
                 {"t0", t0},
                 {"lambda1_unit", lambda1_unit(p, q)},
                 {"rows", rows},
                 {"version", kVersion}};
        emit(c.out, doc.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_snumbers_csv(os, reports);
        emit(c.out, os.str());
    }
    return 0;
}

int cmd_verify(const std::string& suite, const CommonOpts& c) {
    auto results = verify::run_suite(suite);
    bool all = true;
    if (c.format == "json") {
        json rows = json::array();
        for (const auto& r : results) {
            rows.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            all = all && r.pass;
        }
        emit(c.out, json{{"suite", suite}, {"checks", rows}, {"all_pass", all}}.dump(2) + "\n");
    } else {
        std::string text;
        for (const auto& r : results) {
            text += (r.pass ? "PASS " : "FAIL ") + r.name + "  " + r.detail + "\n";
            all = all && r.pass;
        }
        emit(c.out, text);
    }
    return all ? 0 : 1;
}

int cmd_singularity(double p, double q, double lambda, double alpha, double beta,
                    double horizon, double threshold, const CommonOpts& c) {
    IntegrateOptions opts;
    opts.rel_tol = c.rtol;
    opts.abs_tol = c.atol;
    ProblemParams params(p, q, lambda, 1.0);
    BlowupReport rep = detect_blowup(params, {0.0, alpha, 0.0, beta}, threshold, horizon, opts);
    json doc{{"p", p},
             {"q", q},
             {"lambda", lambda},
             {"alpha", alpha},
             {"beta", beta},
             {"horizon", horizon},
             {"threshold", threshold},
             {"monotone_cone_entered", rep.monotone_cone_entered},
             {"tolerances", tolerances_json(opts)},
             {"version", kVersion}};
    switch (rep.status) {
        case BlowupStatus::trivial: doc["status"] = "trivial"; break;
        case BlowupStatus::finite_detected: doc["status"] = "finite-detected"; break;
        default: doc["status"] = "none-up-to-horizon"; break;
    }
    if (rep.t_inf_estimate) doc["t_inf_estimate"] = *rep.t_inf_estimate;
    if (rep.bracket) doc["bracket"] = {rep.bracket->first, rep.bracket->second};
    if (!rep.threshold_times.empty()) {
        json tt = json::array();
        for (auto& [m, t] : rep.threshold_times) tt.push_back({{"threshold", m}, {"time", t}});
        doc["threshold_times"] = tt;
    }
    emit(c.out, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlinear pq-biharmonic eigenvalue problem: solves, spectra, s-numbers"};
    app.require_subcommand(1);

    // gtrig
    auto* gtrig = app.add_subcommand("gtrig", "tabulate sin_{r,s} and cos_{r,s}");
    double r = 2.0, s = 2.0, tmin = 0.0;
    int points = 33;
    std::optional<double> tmax_opt;
    CommonOpts gtrig_c;
    gtrig->add_option("--r", r, "first exponent")->required()->check(exceeds_one("r"));
    gtrig->add_option("--s", s, "second exponent")->required()->check(exceeds_one("s"));
    gtrig->add_option("--points", points, "number of samples")->check(CLI::Range(2, 10000000));
    gtrig->add_option("--tmin", tmin, "table start");
    double tmax_val = 0.0;
    auto* tmax_flag = gtrig->add_option("--tmax", tmax_val, "table end (default pi_rs/2)");
    add_common(gtrig, gtrig_c);

    // solve
    auto* solve = app.add_subcommand("solve", "solve the eigenvalue problem on [0, t0]");
    double p = 2.0, q = 2.0, t0 = 1.0;
    std::string lambda_arg = "auto";
    int samples = 513;
    CommonOpts solve_c;
    solve->add_option("--p", p, "exponent p")->required()->check(exceeds_one("p"));
    solve->add_option("--q", q, "exponent q")->required()->check(exceeds_one("q"));
    solve->add_option("--t0", t0, "interval length")->check(positive("t0"));
    solve->add_option("--lambda", lambda_arg,
                      "eigenvalue target, or 'auto' (determined for p = q, 1 otherwise)");
    solve->add_option("--samples", samples, "CSV sample count")->check(CLI::Range(2, 10000000));
    add_common(solve, solve_c);

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "spectral chain table");
    double sp = 2.0, sq = 2.0, st0 = 1.0;
    int sn = 5;
    CommonOpts spectrum_c;
    spectrum->add_option("--p", sp, "exponent p")->required()->check(exceeds_one("p"));
    spectrum->add_option("--q", sq, "exponent q")->required()->check(exceeds_one("q"));
    spectrum->add_option("--t0", st0, "interval length")->check(positive("t0"));
    spectrum->add_option("--n", sn, "largest index")->check(CLI::PositiveNumber);
    add_common(spectrum, spectrum_c);

    // snumbers
    auto* snumbers = app.add_subcommand("snumbers", "s-number bounds table");
    double np = 2.0, nq = 2.0, nt0 = 1.0;
    int nn = 5;
    CommonOpts snumbers_c;
    snumbers->add_option("--p", np, "exponent p")->required()->check(exceeds_one("p"));
    snumbers->add_option("--q", nq, "exponent q")->required()->check(exceeds_one("q"));
    snumbers->add_option("--t0", nt0, "interval length")->check(positive("t0"));
    snumbers->add_option("--n", nn, "largest index")->check(CLI::PositiveNumber);
    add_common(snumbers, snumbers_c);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    CommonOpts verify_c;
    verify_cmd->add_option("--suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember(verify::suite_names()));
    add_common(verify_cmd, verify_c);

    // singularity
    auto* sing = app.add_subcommand("singularity", "blow-up detection report");
    double bp = 2.0, bq = 2.0, blambda = 1.0, balpha = 1.0, bbeta = -1.0;
    double horizon = 50.0, threshold = 1e8;
    CommonOpts sing_c;
    sing->add_option("--p", bp, "exponent p")->required()->check(exceeds_one("p"));
    sing->add_option("--q", bq, "exponent q")->required()->check(exceeds_one("q"));
    sing->add_option("--lambda", blambda, "eigenvalue parameter")->check(positive("lambda"));
    sing->add_option("--alpha", balpha, "initial slope u'(0)");
    sing->add_option("--beta", bbeta, "initial w2(0)");
    sing->add_option("--horizon", horizon, "integration horizon")->check(positive("horizon"));
    sing->add_option("--threshold", threshold, "blow-up threshold")
        ->check(positive("threshold"));
    add_common(sing, sing_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gtrig->parsed()) {
            const double tmax =
                tmax_flag->count() > 0 ? tmax_val : pi_rs(GenTrigParams(r, s)) / 2.0;
            return cmd_gtrig(r, s, points, tmin, tmax, gtrig_c);
        }
        if (solve->parsed()) return cmd_solve(p, q, t0, lambda_arg, samples, solve_c);
        if (spectrum->parsed()) return cmd_spectrum(sp, sq, st0, sn, spectrum_c);
        if (snumbers->parsed()) return cmd_snumbers(np, nq, nt0, nn, snumbers_c);
        if (verify_cmd->parsed()) return cmd_verify(suite, verify_c);
        if (sing->parsed())
            return cmd_singularity(bp, bq, blambda, balpha, bbeta, horizon, threshold, sing_c);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
