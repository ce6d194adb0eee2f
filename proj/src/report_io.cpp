#include "entqp/report_io.hpp"

#include "entqp/errors.hpp"
#include "entqp/numeric_format.hpp"

#include <numbers>
#include <ostream>
#include <string>

namespace entqp::report_io {

namespace {

void append_index_array(std::string& out, const std::vector<Eigen::Index>& values) {
    out += '[';
    for (size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(values[i]);
    }
    out += ']';
}

void append_sign_array(std::string& out, const se_solver::SignVector& signs) {
    out += '[';
    for (size_t i = 0; i < signs.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(signs[i]);
    }
    out += ']';
}

template <typename Vector>
void append_real_array(std::string& out, const Vector& values) {
    out += '[';
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        append_real(out, values(i));
    }
    out += ']';
}

void append_solution_object(std::string& out, const se_solver::SESolution<double>& sol,
                            Eigen::Index label) {
    out += "{\"k\": " + std::to_string(label) + ", \"support\": ";
    append_index_array(out, sol.support.indices);
    out += ", \"e\": ";
    append_sign_array(out, sol.e);
    out += ", \"root_signs\": ";
    append_sign_array(out, sol.root_signs);
    out += ", \"g\": ";
    append_real(out, sol.g);
    out += ", \"a_re\": ";
    append_real_array(out, sol.amplitudes.real());
    out += ", \"a_im\": ";
    append_real_array(out, sol.amplitudes.imag());
    out += ", \"residual\": ";
    append_real(out, sol.residual);
    out += '}';
}

void append_solutions_array(std::string& out, const std::vector<se_solver::SESolution<double>>& solutions,
                            const std::string& indent) {
    out += "[\n";
    for (size_t k = 0; k < solutions.size(); ++k) {
        out += indent + "  ";
        append_solution_object(out, solutions[k], static_cast<Eigen::Index>(k) + 1);
        out += k + 1 < solutions.size() ? ",\n" : "\n";
    }
    out += indent + "]";
}

void append_state_meta(std::string& out, const quasiprob::AnalysisReport<double>& report) {
    out += "{\"dim\": " + std::to_string(report.state.dim);
    if (report.state.meta) {
        const auto& meta = *report.state.meta;
        if (meta.zeta) {
            out += ", \"zeta\": ";
            append_real(out, *meta.zeta);
        }
        out += ", \"sigma\": ";
        append_real(out, meta.sigma);
        out += ", \"source\": \"" + state_model::to_string(meta.source) + "\"";
    }
    out += '}';
}

std::string sign_string(const se_solver::SignVector& signs) {
    std::string text;
    for (int s : signs)
        text += s > 0 ? '+' : '-';
    return text;
}

} // namespace

void write_solutions_json(const std::vector<se_solver::SESolution<double>>& solutions,
                          std::ostream& out) {
    std::string text;
    append_solutions_array(text, solutions, "");
    text += '\n';
    out << text;
    if (!out)
        throw Error("solutions write failed");
}

void write_report_json(const quasiprob::AnalysisReport<double>& report, std::ostream& out) {
    std::string text = "{\n  \"state_meta\": ";
    append_state_meta(text, report);
    text += ",\n  \"solutions\": ";
    append_solutions_array(text, report.solutions, "  ");
    text += ",\n  \"gram_residual\": ";
    append_real(text, report.quasiprob.residual);
    text += ",\n  \"weights\": ";
    append_real_array(text, report.quasiprob.weights);
    text += ",\n  \"min_weight\": ";
    append_real(text, report.quasiprob.min_weight);
    text += ",\n  \"negative_indices\": ";
    append_index_array(text, report.quasiprob.negative_indices);
    text += ",\n  \"sum_weights\": ";
    append_real(text, report.quasiprob.sum_weights);
    text += ",\n  \"trace\": ";
    append_real(text, report.state.trace());
    text += ",\n  \"epsilon\": ";
    append_real(text, report.reconstruction.epsilon);
    text += ",\n  \"ppt\": {\"min_eigenvalue\": ";
    append_real(text, report.ppt.min_eigenvalue);
    text += ", \"entangled\": ";
    text += report.ppt.entangled ? "true" : "false";
    text += "}\n}\n";
    out << text;
    if (!out)
        throw Error("report write failed");
}

void write_quasiprob_csv(const quasiprob::AnalysisReport<double>& report, std::ostream& out) {
    if (report.quasiprob.weights.size() != static_cast<Eigen::Index>(report.solutions.size()))
        throw DimensionError("write_quasiprob_csv: weight count must match solution count");
    std::string text = "k,support,e,root_signs,g,p\n";
    for (size_t k = 0; k < report.solutions.size(); ++k) {
        const auto& sol = report.solutions[k];
        text += std::to_string(k + 1) + ',';
        for (size_t i = 0; i < sol.support.indices.size(); ++i) {
            if (i)
                text += ';';
            text += std::to_string(sol.support.indices[i]);
        }
        text += ',' + sign_string(sol.e) + ',' + sign_string(sol.root_signs) + ',';
        append_real(text, sol.g);
        text += ',';
        append_real(text, report.quasiprob.weights(static_cast<Eigen::Index>(k)));
        text += '\n';
    }
    out << text;
    if (!out)
        throw Error("quasiprob write failed");
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    std::string text = "sigma,min_weight,epsilon,ppt_min_eig\n";
    for (const auto& row : rows) {
        append_real(text, row.sigma);
        text += ',';
        append_real(text, row.min_weight);
        text += ',';
        append_real(text, row.epsilon);
        text += ',';
        append_real(text, row.ppt_min_eig);
        text += '\n';
    }
    out << text;
    if (!out)
        throw Error("sweep write failed");
}

void write_phase_csv(const state_model::PhaseDistribution& dist, int samples, std::ostream& out) {
    if (samples < 2)
        throw ParameterError("write_phase_csv: need at least 2 samples");
    std::string text = "phi,pdf\n";
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < samples; ++i) {
        const double phi = two_pi * i / samples;
        append_real(text, phi);
        text += ',';
        append_real(text, state_model::phase_pdf(dist, phi));
        text += '\n';
    }
    out << text;
    if (!out)
        throw Error("phase write failed");
}

} // namespace entqp::report_io
