#include <CLI11.hpp>

#include "entqp/errors.hpp"
#include "entqp/matrix_io.hpp"
#include "entqp/numeric_format.hpp"
#include "entqp/quasiprob.hpp"
#include "entqp/report_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

namespace sm = entqp::state_model;
namespace qp = entqp::quasiprob;
namespace io = entqp::report_io;

// Flag misuse that CLI11 cannot see on its own; mapped to exit code 64.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateFlags {
    double zeta = 0.62;
    double noise_db = 0;
    std::string input;
    int dim = 2;
    std::string sigma_text = "0";
    CLI::Option* db_opt = nullptr;
    CLI::Option* input_opt = nullptr;
    CLI::Option* dim_opt = nullptr;
};

struct ToleranceFlags {
    double residual_tol = 1e-9;
    double rank_cutoff = 1e-10;
    int max_dim = 8;
};

struct OutputFlags {
    std::string out;
    std::string format = "json";
    std::vector<std::string> emit;
    int samples = 512;
};

std::string check_range(const std::string& text, double lo, double hi, bool open,
                        const std::string& name) {
    double value = 0;
    if (!entqp::parse_real(text, value))
        return name + " must be a number";
    const bool ok = open ? (value > lo && value < hi) : (value >= lo && value <= hi);
    if (!ok)
        return name + " must lie in " + (open ? "(" : "[") + entqp::format_real(lo) + ", " +
               entqp::format_real(hi) + (open ? ")" : "]");
    return {};
}

void add_state_flags(CLI::App* cmd, StateFlags& flags) {
    auto* zeta_opt = cmd->add_option("--zeta", flags.zeta,
                                     "Squeezing parameter in (0,1) [default 0.62]");
    zeta_opt->check([](const std::string& s) { return check_range(s, 0, 1, true, "--zeta"); });
    flags.db_opt = cmd->add_option("--db", flags.noise_db,
                                   "Squeezing as a noise reduction in dB (> 0)");
    flags.db_opt->check([](const std::string& s) {
        double v = 0;
        if (!entqp::parse_real(s, v) || !(v > 0))
            return std::string("--db must be a positive number");
        return std::string();
    });
    flags.input_opt = cmd->add_option("--input", flags.input,
                                      "Coefficient matrix file (.json or CSV) instead of --zeta/--db");
    zeta_opt->excludes(flags.db_opt);
    zeta_opt->excludes(flags.input_opt);
    flags.db_opt->excludes(flags.input_opt);
    flags.dim_opt = cmd->add_option("--dim", flags.dim, "Truncation dimension [default 2]");
    flags.dim_opt->check(CLI::PositiveNumber);
    cmd->add_option("--sigma", flags.sigma_text,
                    "Dephasing standard deviation(s), comma separated [default 0]");
}

void add_tolerance_flags(CLI::App* cmd, ToleranceFlags& flags) {
    cmd->add_option("--residual-tol", flags.residual_tol,
                    "Tolerance on eigenvalue-equation and Gram residuals [default 1e-9]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--rank-cutoff", flags.rank_cutoff,
                    "Relative singular-value cutoff of the Gram solve [default 1e-10]")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-dim", flags.max_dim,
                    "Enumeration cap on the dimension [default 8]")
        ->check(CLI::PositiveNumber);
}

std::vector<double> parse_sigma_list(const std::string& text) {
    std::vector<double> values;
    size_t start = 0;
    while (true) {
        const size_t pos = text.find(',', start);
        const std::string field =
            pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
        double value = 0;
        if (!entqp::parse_real(field, value) || !(value >= 0))
            throw UsageError("--sigma values must be numbers >= 0, got `" + field + "`");
        values.push_back(value);
        if (pos == std::string::npos)
            return values;
        start = pos + 1;
    }
}

sm::CoefficientMatrix<double> build_state(const StateFlags& flags, double sigma) {
    sm::CoefficientMatrix<double> base;
    if (flags.input_opt->count() > 0) {
        base = sm::load_matrix(std::filesystem::path(flags.input));
        if (flags.dim_opt->count() > 0 && base.dim != flags.dim)
            throw UsageError("--dim " + std::to_string(flags.dim) + " disagrees with the file dimension " +
                             std::to_string(base.dim));
    } else {
        const double zeta =
            flags.db_opt->count() > 0 ? sm::zeta_from_db(flags.noise_db) : flags.zeta;
        base = sm::build_tmsv(zeta, flags.dim);
    }
    return sm::apply_dephasing(base, sigma);
}

qp::AnalysisOptions<double> make_options(const ToleranceFlags& flags) {
    qp::AnalysisOptions<double> opts;
    opts.solver.residual_tol = flags.residual_tol;
    opts.solver.max_dim = flags.max_dim;
    opts.rank_cutoff = flags.rank_cutoff;
    return opts;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw entqp::Error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out)
        throw entqp::Error("write to " + path.string() + " failed");
}

void reject_delta(double sigma) {
    if (sigma == 0)
        throw entqp::ParameterError(
            "sigma = 0 describes a point mass at phi = 0 (no density); nothing to tabulate");
}

int run_analyze(const StateFlags& state_flags, const ToleranceFlags& tol_flags,
                const OutputFlags& out_flags) {
    const auto sigmas = parse_sigma_list(state_flags.sigma_text);
    if (sigmas.size() != 1)
        throw UsageError("analyze takes a single --sigma value; use the sweep command for lists");
    const double sigma = sigmas.front();

    const auto state = build_state(state_flags, sigma);
    const auto report = qp::analyze(state, make_options(tol_flags));

    std::vector<std::string> artifacts = out_flags.emit;
    if (artifacts.empty())
        artifacts.push_back(out_flags.format == "csv" ? "quasiprob" : "report");
    // Canonical emission order regardless of flag order.
    const std::vector<std::string> order = {"report", "solutions", "quasiprob", "phase_dist"};
    std::vector<std::string> selected;
    for (const auto& name : order)
        if (std::find(artifacts.begin(), artifacts.end(), name) != artifacts.end())
            selected.push_back(name);
    if (selected.size() > 1 && out_flags.out.empty())
        throw UsageError("--out is required when emitting more than one artifact");

    for (const auto& name : selected) {
        std::ostringstream buffer;
        std::string suffix;
        if (name == "report") {
            io::write_report_json(report, buffer);
            suffix = "report.json";
        } else if (name == "solutions") {
            io::write_solutions_json(report.solutions, buffer);
            suffix = "solutions.json";
        } else if (name == "quasiprob") {
            io::write_quasiprob_csv(report, buffer);
            suffix = "quasiprob.csv";
        } else {
            reject_delta(sigma);
            io::write_phase_csv(sm::make_phase_distribution(sigma), out_flags.samples, buffer);
            suffix = "phase.csv";
        }
        if (out_flags.out.empty())
            std::cout << buffer.str();
        else if (selected.size() == 1)
            write_file(out_flags.out, buffer.str());
        else
            write_file(out_flags.out + "." + suffix, buffer.str());
    }
    return report.exact ? 0 : 2;
}

int run_sweep(const StateFlags& state_flags, const ToleranceFlags& tol_flags,
              const OutputFlags& out_flags) {
    const auto sigmas = parse_sigma_list(state_flags.sigma_text);
    std::vector<io::SweepRow> rows;
    bool all_exact = true;
    for (double sigma : sigmas) {
        const auto state = build_state(state_flags, sigma);
        const auto report = qp::analyze(state, make_options(tol_flags));
        rows.push_back({sigma, report.quasiprob.min_weight, report.reconstruction.epsilon,
                        report.ppt.min_eigenvalue});
        all_exact = all_exact && report.exact;
    }
    std::ostringstream buffer;
    io::write_sweep_csv(rows, buffer);
    if (out_flags.out.empty())
        std::cout << buffer.str();
    else
        write_file(out_flags.out, buffer.str());
    return all_exact ? 0 : 2;
}

int run_phase_dist(const std::string& sigma_text, const OutputFlags& out_flags) {
    const auto sigmas = parse_sigma_list(sigma_text);
    if (sigmas.size() != 1)
        throw UsageError("phase-dist takes a single --sigma value");
    reject_delta(sigmas.front());
    std::ostringstream buffer;
    io::write_phase_csv(sm::make_phase_distribution(sigmas.front()), out_flags.samples, buffer);
    if (out_flags.out.empty())
        std::cout << buffer.str();
    else
        write_file(out_flags.out, buffer.str());
    return 0;
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags, bool with_emit) {
    cmd->add_option("--out", flags.out, "Output path (stdout when omitted)");
    if (with_emit) {
        cmd->add_option("--format", flags.format, "Default artifact: json = report, csv = quasiprob table")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--emit", flags.emit,
                        "Artifacts to write: report, solutions, quasiprob, phase_dist")
            ->delimiter(',')
            ->check(CLI::IsMember({"report", "solutions", "quasiprob", "phase_dist"}));
    }
    cmd->add_option("--samples", flags.samples, "Grid points of phase-distribution tables [default 512]")
        ->check(CLI::Range(2, 1 << 24));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement quasiprobabilities of truncated dephased two-mode "
                 "squeezed-vacuum states"};
    app.require_subcommand(1);

    StateFlags analyze_state, sweep_state;
    ToleranceFlags analyze_tol, sweep_tol;
    OutputFlags analyze_out, sweep_out, phase_out;
    std::string phase_sigma = "0";

    auto* analyze_cmd = app.add_subcommand(
        "analyze", "Solve one state end to end and report weights, negativities, and checks");
    add_state_flags(analyze_cmd, analyze_state);
    add_tolerance_flags(analyze_cmd, analyze_tol);
    add_output_flags(analyze_cmd, analyze_out, true);

    auto* sweep_cmd = app.add_subcommand(
        "sweep", "Analyze one state per --sigma value and tabulate negativity against dephasing");
    add_state_flags(sweep_cmd, sweep_state);
    add_tolerance_flags(sweep_cmd, sweep_tol);
    add_output_flags(sweep_cmd, sweep_out, false);

    auto* phase_cmd = app.add_subcommand(
        "phase-dist", "Tabulate the wrapped Gaussian phase density on [0,2pi)");
    phase_cmd->add_option("--sigma", phase_sigma, "Standard deviation (> 0)");
    add_output_flags(phase_cmd, phase_out, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (analyze_cmd->parsed())
            return run_analyze(analyze_state, analyze_tol, analyze_out);
        if (sweep_cmd->parsed())
            return run_sweep(sweep_state, sweep_tol, sweep_out);
        return run_phase_dist(phase_sigma, phase_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
