#pragma once

#include <iosfwd>
#include <vector>

#include "entqp/quasiprob.hpp"

namespace entqp::report_io {

// All writers emit a fixed key/column order and decimals with 17 significant
// digits, so identical inputs produce byte-identical files. Solution labels k
// are 1-based throughout.

void write_solutions_json(const std::vector<se_solver::SESolution<double>>& solutions,
                          std::ostream& out);

void write_report_json(const quasiprob::AnalysisReport<double>& report, std::ostream& out);

// Columns: k,support,e,root_signs,g,p. Support indices are joined with ';',
// sign vectors are strings of '+' and '-'.
void write_quasiprob_csv(const quasiprob::AnalysisReport<double>& report, std::ostream& out);

struct SweepRow {
    double sigma = 0;
    double min_weight = 0;
    double epsilon = 0;
    double ppt_min_eig = 0;
};

// Columns: sigma,min_weight,epsilon,ppt_min_eig; one row per sweep point in
// input order.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

// Columns: phi,pdf over a uniform grid of `samples` points covering [0,2pi).
void write_phase_csv(const state_model::PhaseDistribution& dist, int samples, std::ostream& out);

} // namespace entqp::report_io
