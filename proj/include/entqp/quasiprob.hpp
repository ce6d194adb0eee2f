#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "entqp/errors.hpp"
#include "entqp/se_solver.hpp"
#include "entqp/state_model.hpp"

namespace entqp::quasiprob {

using se_solver::SESolution;
using state_model::CoefficientMatrix;

// Overlap system linking solution weights to separability eigenvalues:
// G p = g_vec with G_{k,l} the squared two-mode overlap of solutions k and l.
template <typename Scalar = double>
struct GramSystem {
    Eigen::MatrixX<Scalar> G; // symmetric, entries in [0,1], unit diagonal
    Eigen::VectorX<Scalar> g_vec;

    Eigen::Index size() const { return G.rows(); }
};

// G_{k,l} = |<a_k,a_k|a_l,a_l>|^2 = |<a_k|a_l>|^4 for equal tensor factors.
// The upper triangle is computed and mirrored, so G is symmetric bitwise.
template <typename Scalar>
GramSystem<Scalar> build_gram(const std::vector<SESolution<Scalar>>& solutions) {
    if (solutions.empty())
        throw ParameterError("build_gram: empty solution list");
    const Eigen::Index k_count = static_cast<Eigen::Index>(solutions.size());
    const Eigen::Index dim = solutions.front().amplitudes.size();
    GramSystem<Scalar> system;
    system.G.resize(k_count, k_count);
    system.g_vec.resize(k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const auto& sol = solutions[static_cast<size_t>(k)];
        if (sol.amplitudes.size() != dim)
            throw DimensionError("build_gram: solutions have mixed dimensions");
        system.g_vec(k) = sol.g;
        system.G(k, k) = Scalar(1);
        for (Eigen::Index l = k + 1; l < k_count; ++l) {
            const std::complex<Scalar> overlap =
                sol.amplitudes.dot(solutions[static_cast<size_t>(l)].amplitudes);
            const Scalar squared = std::norm(overlap);
            const Scalar value = std::min(Scalar(1), squared * squared);
            system.G(k, l) = value;
            system.G(l, k) = value;
        }
    }
    return system;
}

template <typename Scalar = double>
struct QuasiprobDistribution {
    Eigen::VectorX<Scalar> weights;
    Scalar min_weight = 0;
    std::vector<Eigen::Index> negative_indices; // 1-based labels below the noise floor
    Scalar sum_weights = 0;
    Scalar residual = 0; // max-norm defect of G p = g_vec
    Eigen::Index rank_used = 0;
    bool exact = false; // residual within tolerance
};

// Minimum-norm least-squares solution of G p = g_vec. Singular values below
// rank_cutoff times the largest are discarded, which reproduces a plain
// inversion for well-conditioned systems and degrades gracefully when
// projectors coincide. A weight only counts as negative below
// -max(residual_tol, 10 residual), so numerical noise is never reported as
// entanglement.
template <typename Scalar>
QuasiprobDistribution<Scalar> solve_quasiprob(const GramSystem<Scalar>& system,
                                              Scalar rank_cutoff = Scalar(1e-10),
                                              Scalar residual_tol = Scalar(1e-9)) {
    if (system.size() < 1)
        throw ParameterError("solve_quasiprob: empty system");
    if (system.g_vec.size() != system.size())
        throw DimensionError("solve_quasiprob: G and g_vec sizes disagree");
    Eigen::BDCSVD<Eigen::MatrixX<Scalar>> svd(system.G,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(rank_cutoff);

    QuasiprobDistribution<Scalar> dist;
    dist.weights = svd.solve(system.g_vec);
    dist.rank_used = svd.rank();
    dist.residual =
        (system.G * dist.weights - system.g_vec).template lpNorm<Eigen::Infinity>();
    dist.min_weight = dist.weights.minCoeff();
    dist.sum_weights = dist.weights.sum();
    dist.exact = dist.residual <= residual_tol;
    const Scalar floor = std::max(residual_tol, Scalar(10) * dist.residual);
    for (Eigen::Index k = 0; k < dist.weights.size(); ++k)
        if (dist.weights(k) < -floor)
            dist.negative_indices.push_back(k + 1);
    return dist;
}

// Weighted sum of product projectors sum_k p_k |a_k,a_k><a_k,a_k| on the
// d^2-dimensional two-mode basis, pair (m,n) at index m d + n. The complex
// accumulation is Hermitian by construction; matrix holds its real part and
// max_imag the largest imaginary residue that was discarded.
template <typename Scalar = double>
struct ReconstructedState {
    Eigen::MatrixX<Scalar> matrix;
    Scalar max_imag = 0;
};

template <typename Scalar, typename Derived>
ReconstructedState<Scalar> reconstruct_state(const std::vector<SESolution<Scalar>>& solutions,
                                             const Eigen::MatrixBase<Derived>& weights) {
    if (solutions.empty())
        throw ParameterError("reconstruct_state: empty solution list");
    if (static_cast<Eigen::Index>(solutions.size()) != weights.size() || weights.cols() != 1)
        throw DimensionError("reconstruct_state: weight count must match solution count");
    using Complex = std::complex<Scalar>;
    const Eigen::Index d = solutions.front().amplitudes.size();
    Eigen::MatrixX<Complex> sum = Eigen::MatrixX<Complex>::Zero(d * d, d * d);
    Eigen::VectorX<Complex> v(d * d);
    for (size_t k = 0; k < solutions.size(); ++k) {
        const auto& a = solutions[k].amplitudes;
        if (a.size() != d)
            throw DimensionError("reconstruct_state: solutions have mixed dimensions");
        for (Eigen::Index m = 0; m < d; ++m)
            for (Eigen::Index n = 0; n < d; ++n)
                v(m * d + n) = a(m) * a(n);
        sum.noalias() += Complex(weights(static_cast<Eigen::Index>(k))) * (v * v.adjoint());
    }
    ReconstructedState<Scalar> rec;
    rec.matrix = sum.real();
    rec.max_imag = sum.imag().cwiseAbs().maxCoeff();
    return rec;
}

// Embeds a coefficient matrix into the two-mode basis: rho_{m,n} lands at
// ((m,m),(n,n)); every other slot is zero.
template <typename Scalar>
Eigen::MatrixX<Scalar> embed_two_mode(const CoefficientMatrix<Scalar>& state) {
    const Eigen::Index d = state.dim;
    Eigen::MatrixX<Scalar> embedded = Eigen::MatrixX<Scalar>::Zero(d * d, d * d);
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n)
            embedded(m * d + m, n * d + n) = state.entries(m, n);
    return embedded;
}

template <typename Scalar = double>
struct ReconstructionReport {
    Scalar epsilon = 0;
    Scalar trace_original = 0;
    Scalar trace_reconstructed = 0;
    Scalar ls_residual = 0;
    Eigen::Index rank_used = 0;
};

// Relative Hilbert-Schmidt distance between a reconstruction and the embedded
// original: epsilon = sqrt(Tr((rec - rho)^2) / Tr(rho^2)). Both operators are
// symmetric, so the traces reduce to squared Frobenius norms.
template <typename Scalar, typename Derived>
ReconstructionReport<Scalar> reconstruction_error(const CoefficientMatrix<Scalar>& original,
                                                  const Eigen::MatrixBase<Derived>& reconstructed) {
    const Eigen::Index d = original.dim;
    if (reconstructed.rows() != d * d || reconstructed.cols() != d * d)
        throw DimensionError("reconstruction_error: reconstructed operator must be d^2 x d^2");
    const Eigen::MatrixX<Scalar> embedded = embed_two_mode(original);
    const Scalar denom = embedded.squaredNorm();
    if (!(denom > Scalar(0)))
        throw ParameterError("reconstruction_error: original state has zero Hilbert-Schmidt norm");
    ReconstructionReport<Scalar> report;
    report.epsilon = std::sqrt((reconstructed - embedded).squaredNorm() / denom);
    report.trace_original = embedded.trace();
    report.trace_reconstructed = reconstructed.trace();
    return report;
}

template <typename Scalar = double>
struct PPTResult {
    Scalar min_eigenvalue = 0;
    bool entangled = false; // min eigenvalue below -1e-12
};

// Partial transpose of the embedded operator on the second mode followed by a
// dense symmetric eigensolve. A negative spectrum certifies entanglement; the
// test is decisive only for dim = 2.
template <typename Scalar>
PPTResult<Scalar> ppt_check(const CoefficientMatrix<Scalar>& state) {
    state_model::validate(state);
    const Eigen::Index d = state.dim;
    const Eigen::MatrixX<Scalar> embedded = embed_two_mode(state);
    Eigen::MatrixX<Scalar> transposed(d * d, d * d);
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n)
            for (Eigen::Index p = 0; p < d; ++p)
                for (Eigen::Index q = 0; q < d; ++q)
                    transposed(m * d + q, p * d + n) = embedded(m * d + n, p * d + q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixX<Scalar>> solver(transposed,
                                                                 Eigen::EigenvaluesOnly);
    PPTResult<Scalar> result;
    result.min_eigenvalue = solver.eigenvalues().minCoeff();
    result.entangled = result.min_eigenvalue < Scalar(-1e-12);
    return result;
}

template <typename Scalar = double>
struct AnalysisOptions {
    se_solver::SolverOptions<Scalar> solver{};
    Scalar rank_cutoff = Scalar(1e-10);
    Scalar epsilon_tol = Scalar(1e-6); // reconstruction error above this marks the run inexact
};

template <typename Scalar = double>
struct AnalysisReport {
    CoefficientMatrix<Scalar> state;
    std::vector<SESolution<Scalar>> solutions;
    GramSystem<Scalar> gram;
    QuasiprobDistribution<Scalar> quasiprob;
    ReconstructionReport<Scalar> reconstruction;
    PPTResult<Scalar> ppt;
    se_solver::SolveDiagnostics diagnostics{};
    bool exact = false; // gram residual, weight sum rule, and epsilon all within tolerance
};

// Full pipeline: enumerate solutions, assemble and solve the Gram system,
// reconstruct the state, measure the reconstruction error, and run the
// partial-transpose cross-check.
template <typename Scalar>
AnalysisReport<Scalar> analyze(const CoefficientMatrix<Scalar>& state,
                               const AnalysisOptions<Scalar>& opts = {}) {
    AnalysisReport<Scalar> report;
    report.state = state;
    report.solutions = se_solver::enumerate_solutions(state, opts.solver, &report.diagnostics);
    if (report.solutions.empty())
        throw ParameterError("analyze: no solvable supports; the state is numerically degenerate");
    report.gram = build_gram(report.solutions);
    report.quasiprob = solve_quasiprob(report.gram, opts.rank_cutoff, opts.solver.residual_tol);
    const auto rec = reconstruct_state(report.solutions, report.quasiprob.weights);
    report.reconstruction = reconstruction_error(state, rec.matrix);
    report.reconstruction.ls_residual = report.quasiprob.residual;
    report.reconstruction.rank_used = report.quasiprob.rank_used;
    report.ppt = ppt_check(state);
    const Scalar trace = state.trace();
    const bool sum_rule_ok =
        std::abs(report.quasiprob.sum_weights - trace) <= opts.solver.residual_tol;
    report.exact = report.quasiprob.exact && sum_rule_ok &&
                   report.reconstruction.epsilon <= opts.epsilon_tol;
    return report;
}

} // namespace entqp::quasiprob
