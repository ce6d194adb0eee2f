#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "entqp/errors.hpp"

namespace entqp::state_model {

enum class StateSource { tmsv, dephased_tmsv, file };

inline std::string to_string(StateSource s) {
    switch (s) {
        case StateSource::tmsv: return "tmsv";
        case StateSource::dephased_tmsv: return "dephased_tmsv";
        case StateSource::file: return "file";
    }
    throw InternalError("unknown StateSource");
}

inline std::optional<StateSource> source_from_string(std::string_view s) {
    if (s == "tmsv") return StateSource::tmsv;
    if (s == "dephased_tmsv") return StateSource::dephased_tmsv;
    if (s == "file") return StateSource::file;
    return std::nullopt;
}

// Provenance of a coefficient matrix. zeta is absent when the entries were
// loaded from a file rather than generated.
struct StateMeta {
    std::optional<double> zeta;
    double sigma = 0.0;
    StateSource source = StateSource::file;
};

// Coefficient matrix rho_{m,n} of the two-mode operator
// sum_{m,n} rho_{m,n} |m,m><n,n|, truncated to photon numbers 0..dim-1.
// Entries are real and symmetric, the diagonal is non-negative, and the
// truncated trace is <= 1. The trace is never renormalized; truncation keeps
// the coefficients of the untruncated state.
template <typename Scalar = double>
struct CoefficientMatrix {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Eigen::Index dim = 0;
    Matrix entries;
    std::optional<StateMeta> meta;

    Scalar trace() const { return entries.trace(); }
};

// Throws ValidationError unless `state` satisfies the invariants above,
// with tolerance `tol` on the symmetry, diagonal, and trace checks.
template <typename Scalar>
void validate(const CoefficientMatrix<Scalar>& state, Scalar tol = Scalar(1e-12)) {
    if (state.dim < 1)
        throw ValidationError("coefficient matrix: dim must be >= 1");
    if (state.entries.rows() != state.dim || state.entries.cols() != state.dim)
        throw ValidationError("coefficient matrix: entries must be dim x dim");
    if (!state.entries.allFinite())
        throw ValidationError("coefficient matrix: entries must be finite");
    for (Eigen::Index m = 0; m < state.dim; ++m)
        for (Eigen::Index n = m + 1; n < state.dim; ++n) {
            using std::abs;
            if (abs(state.entries(m, n) - state.entries(n, m)) > tol)
                throw ValidationError("coefficient matrix: asymmetric entries at (" +
                                      std::to_string(m) + "," + std::to_string(n) + ")");
        }
    for (Eigen::Index m = 0; m < state.dim; ++m)
        if (state.entries(m, m) < -tol)
            throw ValidationError("coefficient matrix: negative diagonal entry at (" +
                                  std::to_string(m) + "," + std::to_string(m) + ")");
    if (state.entries.trace() > Scalar(1) + tol)
        throw ValidationError("coefficient matrix: trace exceeds 1");
}

// Two-mode squeezed vacuum truncated to dim photon numbers per mode:
// rho_{m,n} = (1 - zeta^2) zeta^{m+n}. The truncated trace is 1 - zeta^(2 dim).
template <typename Scalar = double>
CoefficientMatrix<Scalar> build_tmsv(Scalar zeta, Eigen::Index dim) {
    if (!(zeta > Scalar(0) && zeta < Scalar(1)))
        throw ParameterError("build_tmsv: zeta must lie in (0,1)");
    if (dim < 1)
        throw ParameterError("build_tmsv: dim must be >= 1");
    Eigen::VectorX<Scalar> powers(dim);
    Scalar p = Scalar(1);
    for (Eigen::Index m = 0; m < dim; ++m, p *= zeta)
        powers(m) = p;
    CoefficientMatrix<Scalar> state;
    state.dim = dim;
    state.entries = (Scalar(1) - zeta * zeta) * (powers * powers.transpose());
    state.meta = StateMeta{static_cast<double>(zeta), 0.0, StateSource::tmsv};
    return state;
}

// Damping factor exp(-sigma^2 k^2 / 2) of the k-th coefficient diagonal.
// Equals the k-th Fourier cosine moment of the wrapped Gaussian phase density.
template <typename Scalar = double>
Scalar dephasing_factor(Scalar sigma, long k) {
    if (!(sigma >= Scalar(0)))
        throw ParameterError("dephasing_factor: sigma must be >= 0");
    using std::exp;
    const Scalar sk = sigma * Scalar(k);
    return exp(Scalar(-0.5) * sk * sk);
}

// Random-phase averaging of one mode: entry (m,n) is damped by
// dephasing_factor(sigma, m - n); the diagonal is unchanged. Repeated
// application composes like a single one with quadrature-summed sigma, and
// the metadata records that accumulated sigma.
template <typename Scalar>
CoefficientMatrix<Scalar> apply_dephasing(CoefficientMatrix<Scalar> state, Scalar sigma) {
    if (!(sigma >= Scalar(0)))
        throw ParameterError("apply_dephasing: sigma must be >= 0");
    if (sigma == Scalar(0))
        return state;
    Eigen::VectorX<Scalar> factor(state.dim);
    for (Eigen::Index k = 0; k < state.dim; ++k)
        factor(k) = dephasing_factor(sigma, k);
    for (Eigen::Index m = 0; m < state.dim; ++m)
        for (Eigen::Index n = 0; n < state.dim; ++n)
            state.entries(m, n) *= factor(m > n ? m - n : n - m);
    StateMeta meta = state.meta.value_or(StateMeta{});
    meta.sigma = std::hypot(meta.sigma, static_cast<double>(sigma));
    meta.source = StateSource::dephased_tmsv;
    state.meta = meta;
    return state;
}

// Wrapped Gaussian density on [0, 2pi): the N(0, sigma^2) density summed over
// wrap_terms full turns to each side. sigma = 0 denotes a point mass at the
// origin; it carries no density and phase_pdf rejects it.
struct PhaseDistribution {
    double sigma = 0.0;
    int wrap_terms = 0;
};

// Chooses wrap_terms so the neglected tail mass stays below ~1e-16 for any
// sigma (the outermost kept turn lies more than 8.5 sigma out).
inline PhaseDistribution make_phase_distribution(double sigma) {
    if (!(sigma >= 0.0))
        throw ParameterError("make_phase_distribution: sigma must be >= 0");
    const double two_pi = 2.0 * std::numbers::pi;
    int wraps = static_cast<int>(std::ceil(8.5 * sigma / two_pi)) + 2;
    return PhaseDistribution{sigma, wraps};
}

inline double phase_pdf(const PhaseDistribution& dist, double phi) {
    if (!(dist.sigma >= 0.0))
        throw ParameterError("phase_pdf: sigma must be >= 0");
    if (dist.sigma == 0.0)
        throw DegenerateDeltaError("phase_pdf: sigma = 0 is a point mass at phi = 0, not a density");
    if (dist.wrap_terms < 1)
        throw ParameterError("phase_pdf: wrap_terms must be >= 1");
    const double two_pi = 2.0 * std::numbers::pi;
    phi -= two_pi * std::floor(phi / two_pi);
    const double inv_var = 1.0 / (dist.sigma * dist.sigma);
    double sum = 0.0;
    for (int p = -dist.wrap_terms; p <= dist.wrap_terms; ++p) {
        const double x = phi + two_pi * p;
        sum += std::exp(-0.5 * x * x * inv_var);
    }
    return sum / std::sqrt(two_pi * dist.sigma * dist.sigma);
}

// Squeezing parameter equivalent to a noise reduction of noise_db decibels:
// zeta = tanh(r) with 10^(noise_db/10) = e^(2r).
inline double zeta_from_db(double noise_db) {
    if (!(noise_db > 0.0) || !std::isfinite(noise_db))
        throw ParameterError("zeta_from_db: noise_db must be > 0");
    return std::tanh(noise_db * std::log(10.0) / 20.0);
}

} // namespace entqp::state_model
