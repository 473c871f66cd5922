#pragma once

#include <optional>
#include <vector>

#include "obslab/system.hpp"

namespace obslab {

// Verdict of the weighted square-function estimate (SQ_β) on a system.
// Holds carries KSq = 1/inf_j, exact on the truncated span.  FailsOnFamily
// is the declared-family verdict: |λ_n| unbounded and per-mode values
// decaying like |λ|^{1-2β} with 1-2β < 0, so no uniform K can exist.
struct SquareFnReport {
    double beta = 0.0;
    std::vector<double> per_mode_j;
    double inf_j = 0.0;
    std::optional<double> KSq;            // 1/inf_j when inf_j > 0
    bool holds = true;                    // false => FailsOnFamily
    std::optional<double> fitted_exponent; // least-squares slope when computable
};

// I(θ) = ∫_0^∞ |e^{-2u e^{iθ}} - e^{-u e^{iθ}}|² du/u² for |θ| <= π/2.
// Integrand expands to e^{-4uc} - 2 e^{-3uc} cos(us) + e^{-2uc} with
// c = cos θ, s = sin θ; the u → 0 singularity is removable (value 1).
// At |θ| = π/2 the analytic value π is returned directly.
// rel_tol must lie in (0, 1e-6]; throws NumericError{ToleranceNotMet}.
double angular_integral(double theta, double rel_tol);

inline constexpr double kDefaultQuadTol = 1e-9;

// j_β(λ) = |λ|^{1-2β} · I(arg λ) / (2β): the per-mode value of the (SQ_β)
// functional on a normalised eigenvector.  Requires λ != 0, Re λ >= 0,
// β in (0,1).
double mode_squarefn(Complex lambda, double beta, double rel_tol = kDefaultQuadTol);

// Per-mode values, inf, K², and the family verdict for a validated
// injective system.
SquareFnReport squarefn_report(const ValidatedSystem& sys, double beta,
                               double rel_tol = kDefaultQuadTol);

// Least-squares slope of log j_β(λ_n) against log |λ_n|.  Needs at least 3
// distinct |λ_n| (PreconditionError{InsufficientModes}); equals 1-2β exactly
// when all arg λ_n coincide.
double decay_exponent_fit(const ValidatedSystem& sys, double beta,
                          double rel_tol = kDefaultQuadTol);

} // namespace obslab
