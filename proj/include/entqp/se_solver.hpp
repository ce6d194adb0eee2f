#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "entqp/errors.hpp"
#include "entqp/state_model.hpp"

namespace entqp::se_solver {

using state_model::CoefficientMatrix;

// Indices carrying nonzero amplitude in a principal solution; strictly
// increasing, non-empty, within the matrix dimension.
struct SupportSet {
    std::vector<Eigen::Index> indices;

    Eigen::Index size() const { return static_cast<Eigen::Index>(indices.size()); }

    friend bool operator==(const SupportSet&, const SupportSet&) = default;
};

// Entrywise signs, one per support index. Canonical vectors fix the first
// entry to +1: a global flip describes the same product state.
using SignVector = std::vector<int>;

// One principal solution of the separability eigenvalue equations
// rho_a |a> = g |a> for the symmetric family (both tensor factors equal a).
template <typename Scalar = double>
struct SESolution {
    SupportSet support;
    SignVector e;          // right-hand-side signs used for this support
    SignVector root_signs; // branch choice of the square root per index; first +1
    Eigen::VectorX<std::complex<Scalar>> amplitudes; // length dim, zero off support
    Scalar g = 0;          // separability eigenvalue, >= 0
    Scalar residual = 0;   // defect of the eigenvalue equations at (a, g)
    Eigen::VectorX<Scalar> c_raw; // solution of rho_support c = e before scaling
};

template <typename Scalar = double>
struct SolverOptions {
    Scalar condition_limit = Scalar(1e12); // supports with worse condition estimate are skipped
    Scalar residual_tol = Scalar(1e-9);    // a defect above this aborts: it indicates a bug
    Eigen::Index max_dim = 8;              // enumeration cap; candidates grow as (5^d - 1)/4
};

// Counts of candidate pairs that produced no solution.
struct SolveDiagnostics {
    long pairs_examined = 0;
    long sign_rejections = 0;     // solved c disagrees with e in sign somewhere
    long degenerate_supports = 0; // submatrix condition estimate beyond the limit
};

// Reduced operator <m| rho_a |n> = a_m^* rho_{m,n} a_n obtained by projecting
// one mode of sum rho_{m,n} |m,m><n,n| onto |a>. Invariant under a global
// phase of a.
template <typename Scalar, typename Derived>
Eigen::MatrixX<std::complex<Scalar>> reduced_operator(const CoefficientMatrix<Scalar>& state,
                                                      const Eigen::MatrixBase<Derived>& a) {
    if (a.size() != state.dim || a.cols() != 1)
        throw DimensionError("reduced_operator: amplitude vector must have length dim");
    using Complex = std::complex<Scalar>;
    Eigen::VectorX<Complex> ac = a.derived().template cast<Complex>();
    return state.entries.template cast<Complex>().cwiseProduct(
        (ac.conjugate() * ac.transpose()).eval());
}

namespace detail {

// Sign pattern number j in lexicographic order (+1 before -1), first entry
// pinned to +1: bit i-1 of j, read from the most significant end, flips
// entry i.
inline SignVector nth_sign_vector(Eigen::Index n, unsigned long j) {
    SignVector signs(static_cast<size_t>(n), +1);
    for (Eigen::Index i = 1; i < n; ++i)
        if ((j >> (n - 1 - i)) & 1UL)
            signs[static_cast<size_t>(i)] = -1;
    return signs;
}

inline std::string worst_case_count(Eigen::Index dim) {
    if (dim > 26)
        return "more than 1e18";
    unsigned long long count = 1;
    for (Eigen::Index i = 0; i < dim; ++i)
        count *= 5ULL;
    return std::to_string((count - 1) / 4);
}

} // namespace detail

// Solves the support-restricted system rho_support c = e by LU with partial
// pivoting, rejects the pair unless sign(c_m) = e_m for every m (the phases
// of c must reproduce e for a self-consistent solution), and on success emits
// one solution per root-sign pattern:
//   g = 1 / sum |c_m|,  a_m = s_m sqrt(g c_m)
// with the principal square root (sqrt of a negative number is +i sqrt|.|).
// Every emitted solution is verified against the eigenvalue equations; a
// defect above residual_tol is an internal error.
template <typename Scalar>
std::vector<SESolution<Scalar>> solve_support(const CoefficientMatrix<Scalar>& state,
                                              const SupportSet& support,
                                              const SignVector& e,
                                              const SolverOptions<Scalar>& opts = {},
                                              SolveDiagnostics* diag = nullptr) {
    const Eigen::Index n = support.size();
    if (n < 1)
        throw ValidationError("solve_support: support must be non-empty");
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index idx = support.indices[static_cast<size_t>(i)];
        if (idx < 0 || idx >= state.dim)
            throw ValidationError("solve_support: support index out of range");
        if (i > 0 && idx <= support.indices[static_cast<size_t>(i - 1)])
            throw ValidationError("solve_support: support indices must be strictly increasing");
    }
    if (static_cast<Eigen::Index>(e.size()) != n)
        throw DimensionError("solve_support: sign vector length must match support size");
    for (int s : e)
        if (s != 1 && s != -1)
            throw ValidationError("solve_support: sign entries must be +1 or -1");
    if (diag)
        ++diag->pairs_examined;

    Eigen::MatrixX<Scalar> sub(n, n);
    Eigen::VectorX<Scalar> rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rhs(i) = Scalar(e[static_cast<size_t>(i)]);
        for (Eigen::Index j = 0; j < n; ++j)
            sub(i, j) = state.entries(support.indices[static_cast<size_t>(i)],
                                      support.indices[static_cast<size_t>(j)]);
    }

    Eigen::PartialPivLU<Eigen::MatrixX<Scalar>> lu(sub);
    if (!(lu.rcond() > Scalar(1) / opts.condition_limit)) {
        if (diag)
            ++diag->degenerate_supports;
        return {};
    }
    const Eigen::VectorX<Scalar> c = lu.solve(rhs);

    for (Eigen::Index i = 0; i < n; ++i)
        if (!(c(i) * rhs(i) > Scalar(0))) {
            if (diag)
                ++diag->sign_rejections;
            return {};
        }

    using Complex = std::complex<Scalar>;
    const Scalar g = Scalar(1) / c.cwiseAbs().sum();
    Eigen::VectorX<Complex> roots(n);
    for (Eigen::Index i = 0; i < n; ++i)
        roots(i) = std::sqrt(Complex(g * c(i)));

    std::vector<SESolution<Scalar>> solutions;
    const unsigned long patterns = 1UL << (n - 1);
    solutions.reserve(patterns);
    for (unsigned long j = 0; j < patterns; ++j) {
        SESolution<Scalar> sol;
        sol.support = support;
        sol.e = e;
        sol.root_signs = detail::nth_sign_vector(n, j);
        sol.amplitudes = Eigen::VectorX<Complex>::Zero(state.dim);
        for (Eigen::Index i = 0; i < n; ++i)
            sol.amplitudes(support.indices[static_cast<size_t>(i)]) =
                Scalar(sol.root_signs[static_cast<size_t>(i)]) * roots(i);
        sol.amplitudes /= sol.amplitudes.norm();
        sol.g = g;
        sol.c_raw = c;
        // Both eigenvalue equations coincide for equal tensor factors, so one
        // defect covers them.
        const auto op = reduced_operator(state, sol.amplitudes);
        sol.residual = (op * sol.amplitudes - Complex(g) * sol.amplitudes).norm();
        if (!(sol.residual <= opts.residual_tol))
            throw InternalError("solve_support: eigenvalue-equation defect " +
                                std::to_string(static_cast<double>(sol.residual)) +
                                " exceeds tolerance; this is a solver bug");
        solutions.push_back(std::move(sol));
    }
    return solutions;
}

// All principal solutions of a coefficient matrix, enumerated over every
// non-empty support (ordered by size, then lexicographically) and every
// canonical sign vector (lexicographic, +1 before -1). Root-sign patterns
// follow in the same lexicographic order, so the output order is fully
// deterministic. Zero-eigenvalue product solutions carry no weight in any
// decomposition and are not emitted.
template <typename Scalar>
std::vector<SESolution<Scalar>> enumerate_solutions(const CoefficientMatrix<Scalar>& state,
                                                    const SolverOptions<Scalar>& opts = {},
                                                    SolveDiagnostics* diag = nullptr) {
    state_model::validate(state);
    const Eigen::Index d = state.dim;
    if (d > opts.max_dim)
        throw ResourceLimitError("enumerate_solutions: dimension " + std::to_string(d) +
                                 " exceeds the cap " + std::to_string(opts.max_dim) +
                                 "; the worst-case candidate count (5^d - 1)/4 is " +
                                 detail::worst_case_count(d));

    std::vector<SESolution<Scalar>> all;
    for (Eigen::Index n = 1; n <= d; ++n) {
        SupportSet support;
        support.indices.resize(static_cast<size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            support.indices[static_cast<size_t>(i)] = i;
        while (true) {
            const unsigned long sign_choices = 1UL << (n - 1);
            for (unsigned long j = 0; j < sign_choices; ++j) {
                auto found = solve_support(state, support, detail::nth_sign_vector(n, j), opts, diag);
                std::move(found.begin(), found.end(), std::back_inserter(all));
            }
            // Advance to the next combination in lexicographic order.
            Eigen::Index i = n - 1;
            while (i >= 0 && support.indices[static_cast<size_t>(i)] == d - n + i)
                --i;
            if (i < 0)
                break;
            ++support.indices[static_cast<size_t>(i)];
            for (Eigen::Index k = i + 1; k < n; ++k)
                support.indices[static_cast<size_t>(k)] =
                    support.indices[static_cast<size_t>(k - 1)] + 1;
        }
    }
    return all;
}

// Largest separability eigenvalue of a solution set. For this state family it
// equals the largest diagonal entry, attained on a single-index support.
template <typename Scalar>
Scalar max_se_value(const std::vector<SESolution<Scalar>>& solutions) {
    if (solutions.empty())
        throw ParameterError("max_se_value: empty solution list");
    Scalar best = solutions.front().g;
    for (const auto& sol : solutions)
        best = std::max(best, sol.g);
    return best;
}

} // namespace entqp::se_solver
