// obslab: numerical analysis of exact observability for observed semigroup
// systems in spectral form.  Subcommands cover scenario generation,
// observability Gramians and windows, BFC scans, square-function reports,
// observability certificates, and consistency diagnostics.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "obslab/bfc.hpp"
#include "obslab/certify.hpp"
#include "obslab/diagnostics.hpp"
#include "obslab/gramian.hpp"
#include "obslab/report.hpp"
#include "obslab/scenario.hpp"
#include "obslab/squarefn.hpp"
#include "obslab/system.hpp"

namespace {

using namespace obslab;

struct CommonOptions {
    std::string scenario_path;
    std::string demo_name;
    int modes = 0;
    std::string out_path;
    double quad_tol = kDefaultQuadTol;
};

CLI::Option* add_source_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "scenario file (UTF-8 object notation)");
    cmd->add_option("--demo", opts.demo_name, "built-in demo: wave | schrodinger1d | heat1d");
    cmd->add_option("--modes", opts.modes, "demo truncation size N >= 1");
    cmd->add_option("--out", opts.out_path, "write the report here instead of stdout");
    return cmd->add_option("--quad-tol", opts.quad_tol,
                           "relative quadrature tolerance (default 1e-9 or OBSLAB_QUAD_TOL)");
}

void apply_quad_tol_env(CommonOptions& opts, bool flag_given) {
    if (flag_given) return;
    const char* env = std::getenv("OBSLAB_QUAD_TOL");
    if (!env) return;
    try {
        std::size_t used = 0;
        const double value = std::stod(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
        opts.quad_tol = value;
    } catch (const std::exception&) {
        throw InputError(ErrorCode::InvalidArgument,
                         "OBSLAB_QUAD_TOL is not a decimal number: " + std::string(env));
    }
}

Scenario resolve_scenario(const CommonOptions& opts) {
    const bool have_file = !opts.scenario_path.empty();
    const bool have_demo = !opts.demo_name.empty();
    if (have_file == have_demo)
        throw InputError(ErrorCode::InvalidArgument,
                         "exactly one of --scenario or --demo must be given");
    if (have_file) return load_scenario(opts.scenario_path);
    if (opts.modes < 1)
        throw InputError(ErrorCode::InvalidArgument, "--demo requires --modes N with N >= 1");
    return build_demo(opts.demo_name, opts.modes);
}

void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw InputError(ErrorCode::InvalidArgument, "cannot write " + opts.out_path);
    out << text;
}

double parse_tau(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "Infinity") return kInfiniteTime;
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw InputError(ErrorCode::InvalidArgument, "--tau expects a number or 'inf'");
    }
}

// "A:B:STEP" -> {A, A+STEP, ..., <= B}; all positive, STEP > 0.
std::vector<double> parse_grid(const std::string& text) {
    double a = 0.0;
    double b = 0.0;
    double step = 0.0;
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    try {
        if (first == std::string::npos || second == std::string::npos)
            throw std::invalid_argument("format");
        std::size_t used = 0;
        a = std::stod(text.substr(0, first), &used);
        b = std::stod(text.substr(first + 1, second - first - 1), &used);
        step = std::stod(text.substr(second + 1), &used);
    } catch (const std::exception&) {
        throw InputError(ErrorCode::InvalidArgument, "grid must be A:B:STEP with decimals");
    }
    if (!(a > 0.0) || !(step > 0.0) || b < a)
        throw InputError(ErrorCode::InvalidArgument,
                         "grid requires 0 < A <= B and STEP > 0, got " + text);
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double t = a + step * i;
        if (t > b * (1.0 + 1e-12)) break;
        grid.push_back(t);
    }
    return grid;
}

std::string verdict_name(bool holds) { return holds ? "holds" : "fails_on_family"; }

// CSV cells are never quoted, so commas in user-provided labels are mapped away.
std::string csv_label(const std::string& label) {
    std::string out = label;
    for (char& c : out)
        if (c == ',' || c == '\n' || c == '\r') c = '_';
    return out;
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_real(*value) : "nan";
}

int run_demo(const CommonOptions& opts) {
    if (opts.demo_name.empty() || opts.modes < 1)
        throw InputError(ErrorCode::InvalidArgument, "demo requires --demo NAME --modes N");
    emit(opts, serialize_scenario(build_demo(opts.demo_name, opts.modes)));
    return 0;
}

int run_gram(const CommonOptions& opts, const std::string& tau_text) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const GramMatrix G = gram(sys, parse_tau(tau_text));
    CsvReport csv({"i", "j", "re", "im"});
    for (Eigen::Index i = 0; i < G.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < G.entries.cols(); ++j)
            csv.add_row({std::to_string(i), std::to_string(j), format_real(G.entries(i, j).real()),
                         format_real(G.entries(i, j).imag())});
    emit(opts, csv.to_string());
    return 0;
}

int run_window_scan(const CommonOptions& opts, const std::string& taus_text) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const std::vector<ObsWindow> windows = window_scan(sys, parse_grid(taus_text));
    CsvReport csv({"tau", "mSq", "MSq"});
    for (const ObsWindow& w : windows)
        csv.add_row({format_real(w.tau), format_real(w.mSq), format_real(w.MSq)});
    emit(opts, csv.to_string());
    return 0;
}

int run_bfc(const CommonOptions& opts, const std::string& etas_text,
            const std::string& taus_text) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const std::vector<double> etas =
        etas_text.empty() ? default_bfc_grid() : parse_grid(etas_text);
    const std::vector<double> taus =
        taus_text.empty() ? default_bfc_grid() : parse_grid(taus_text);
    const BfcScanResult result = bfc_scan(sys, etas, taus);

    CsvReport csv({"found", "eta", "tau", "MSq_eta", "mSq_tau", "margin", "bfc_product",
                   "backward_bound", "epsSq_eta", "backward_ok", "best_margin"});
    if (result.found()) {
        const BfcCertificate& c = *result.certificate;
        const BackwardBoundCheck check = backward_bound_check(sys, c);
        csv.add_row({"yes", format_real(c.eta), format_real(c.tau), format_real(c.MSq_eta),
                     format_real(c.mSq_tau), format_real(c.margin), format_real(c.bfc_product),
                     format_real(check.bound), format_real(check.epsSq),
                     check.ok ? "yes" : "no", format_real(result.best_margin)});
    } else {
        csv.add_row({"no", "nan", "nan", "nan", "nan", "nan", "nan", "nan", "nan", "n/a",
                     format_real(result.best_margin)});
    }
    emit(opts, csv.to_string());
    return 0;
}

int run_squarefn(const CommonOptions& opts, double beta) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const SquareFnReport report = squarefn_report(sys, beta, opts.quad_tol);
    CsvReport csv({"mode", "lambda_re", "lambda_im", "abs_lambda", "arg_lambda", "j", "inf_j",
                   "KSq", "verdict", "fitted_exponent"});
    for (Eigen::Index i = 0; i < sys.mode_count(); ++i) {
        const Complex lambda = sys.eigenvalues()(i);
        csv.add_row({std::to_string(i), format_real(lambda.real()), format_real(lambda.imag()),
                     format_real(std::abs(lambda)),
                     format_real(std::atan2(lambda.imag(), lambda.real())),
                     format_real(report.per_mode_j[static_cast<std::size_t>(i)]),
                     format_real(report.inf_j), format_optional(report.KSq),
                     verdict_name(report.holds), format_optional(report.fitted_exponent)});
    }
    emit(opts, csv.to_string());
    return 0;
}

int run_certify(const CommonOptions& opts, double beta, std::optional<double> omega) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const ObservabilityCertificate cert =
        omega ? certify_finite(sys, beta, *omega, opts.quad_tol)
              : certify_infinite(sys, beta, opts.quad_tol);

    // Cross-check against the Gramian where it is computable.
    std::optional<double> compareSq;
    if (cert.finite) {
        compareSq = obs_window(sys, cert.finite->tau_star).mSq;
    } else if (sys.min_re() > 0.0) {
        compareSq = obs_window(sys, kInfiniteTime).mSq;
    }
    const double claimedSq = cert.finite ? cert.finite->mFiniteSq : cert.mCertSq;
    const std::string sound =
        compareSq ? (claimedSq <= *compareSq + 1e-9 ? "yes" : "no") : "n/a";

    CsvReport csv({"label", "beta", "scope", "omega", "delta", "KSq", "mCertSq", "tau_star",
                   "mFiniteSq", "mCompareSq", "sound", "constant_convention"});
    csv.add_row({csv_label(sys.label()), format_real(cert.beta), cert.finite ? "finite" : "infinite",
                 cert.finite ? format_real(cert.finite->omega) : "nan", format_real(cert.delta),
                 format_real(cert.KSq), format_real(cert.mCertSq),
                 cert.finite ? format_real(cert.finite->tau_star) : "nan",
                 cert.finite ? format_real(cert.finite->mFiniteSq) : "nan",
                 format_optional(compareSq), sound, "proof_chain"});
    emit(opts, csv.to_string());
    return 0;
}

int run_diagnose(const CommonOptions& opts) {
    const ValidatedSystem sys = validate_system(to_system(resolve_scenario(opts)));
    const BfcScanResult bfc = bfc_scan(sys, default_bfc_grid(), default_bfc_grid());
    SpectralDiagnostics diag = spectral_summary(sys);
    diag.flags = consistency_rules(sys, bfc);

    std::string flags;
    for (RuleFlag flag : diag.flags) {
        if (!flags.empty()) flags += ';';
        flags += rule_flag_name(flag);
    }
    if (flags.empty()) flags = "none";

    CsvReport csv({"label", "modes", "supRe", "infRe", "stripWidth", "groupExtendable",
                   "bfc_found", "bfc_margin", "flags"});
    csv.add_row({csv_label(sys.label()), std::to_string(sys.mode_count()), format_real(diag.supRe),
                 format_real(diag.infRe), format_real(diag.stripWidth),
                 diag.groupExtendable ? "yes" : "no", bfc.found() ? "yes" : "no",
                 format_real(bfc.found() ? bfc.certificate->margin : bfc.best_margin), flags});
    emit(opts, csv.to_string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"obslab: exact-observability analysis of spectral semigroup systems"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string tau_text;
    std::string taus_text;
    std::string etas_text;
    double beta = 0.5;
    std::optional<double> omega;

    std::vector<CLI::Option*> quad_tol_options;

    CLI::App* cmd_demo = app.add_subcommand("demo", "emit a built-in demo scenario");
    quad_tol_options.push_back(add_source_options(cmd_demo, opts));

    CLI::App* cmd_gram = app.add_subcommand("gram", "observability Gramian entries");
    quad_tol_options.push_back(add_source_options(cmd_gram, opts));
    cmd_gram->add_option("--tau", tau_text, "window length (number or 'inf')")->required();

    CLI::App* cmd_scan = app.add_subcommand("window-scan", "m(tau)^2, M(tau)^2 over a grid");
    quad_tol_options.push_back(add_source_options(cmd_scan, opts));
    cmd_scan->add_option("--taus", taus_text, "grid A:B:STEP")->required();

    CLI::App* cmd_bfc = app.add_subcommand("bfc", "backward-forward conditioning scan");
    quad_tol_options.push_back(add_source_options(cmd_bfc, opts));
    cmd_bfc->add_option("--etas", etas_text, "eta grid A:B:STEP (default: log grid)");
    cmd_bfc->add_option("--taus", taus_text, "tau grid A:B:STEP (default: log grid)");

    CLI::App* cmd_sq = app.add_subcommand("squarefn", "per-mode square-function report");
    quad_tol_options.push_back(add_source_options(cmd_sq, opts));
    cmd_sq->add_option("--beta", beta, "exponent in (0, 1)")->required();

    CLI::App* cmd_cert = app.add_subcommand("certify", "exact-observability certificate");
    quad_tol_options.push_back(add_source_options(cmd_cert, opts));
    cmd_cert->add_option("--beta", beta, "exponent in (0, 1)")->required();
    cmd_cert->add_option("--omega", omega, "shift for finite-time certification");

    CLI::App* cmd_diag = app.add_subcommand("diagnose", "spectral summary and consistency rules");
    quad_tol_options.push_back(add_source_options(cmd_diag, opts));

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) return app.exit(e); // --help
            std::cerr << e.what() << "\n";
            return 2;
        }
        bool quad_tol_given = false;
        for (const CLI::Option* opt : quad_tol_options)
            if (opt->count() > 0) quad_tol_given = true;
        apply_quad_tol_env(opts, quad_tol_given);

        if (cmd_demo->parsed()) return run_demo(opts);
        if (cmd_gram->parsed()) return run_gram(opts, tau_text);
        if (cmd_scan->parsed()) return run_window_scan(opts, taus_text);
        if (cmd_bfc->parsed()) return run_bfc(opts, etas_text, taus_text);
        if (cmd_sq->parsed()) return run_squarefn(opts, beta);
        if (cmd_cert->parsed()) return run_certify(opts, beta, omega);
        if (cmd_diag->parsed()) return run_diagnose(opts);
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
