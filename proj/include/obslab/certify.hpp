#pragma once

#include <optional>

#include "obslab/squarefn.hpp"
#include "obslab/system.hpp"

namespace obslab {

// Finite-time scope data: smallest grid time tau_star at which the shifted
// estimate closes, with the certified constant for [0, tau_star].
struct FiniteTimeScope {
    double omega = 0.0;
    double tau_star = 0.0;
    double mFiniteSq = 0.0;
};

// Exact-observability certificate.  mCertSq = 2 β δ² / (K² ln 2) follows the
// chain ‖x‖² <= (ln 2 · K²/(2βδ²)) ∫_0^∞ ‖CT(t)x‖² dt, so that
// mCertSq ‖x‖² <= ∫_0^∞ ‖CT(t)x‖² dt on the truncated span.
struct ObservabilityCertificate {
    double beta = 0.0;
    double delta = 0.0;
    double KSq = 0.0;
    double mCertSq = 0.0;
    std::optional<FiniteTimeScope> finite; // empty => infinite-time scope
};

// δ = sqrt(λ_min(D)) with D(m,n) = <CU_n, CU_m>_Y conj(λ_m^{-(1-β)}) λ_n^{-(1-β)}
// (principal powers): the best constant in ‖C A^{-(1-β)} x‖ >= δ ‖x‖ on the
// truncated span.  Requires an injective system.
double delta_lower(const ValidatedSystem& sys, double beta);

// Certificate for ∫_0^∞; requires the square-function verdict to hold and
// δ > 0.  Throws PreconditionError{SquareFunctionFails} or {DeltaZero}.
ObservabilityCertificate certify_infinite(const ValidatedSystem& sys, double beta,
                                          double rel_tol = kDefaultQuadTol);

// Finite-time certificate via the shifted system λ + ω, ω > 0: picks the
// smallest grid τ* with bigM · M'' · e^{-ω τ*} <= 1/2 and returns
// mFiniteSq = (1 - bigM · M'' e^{-ω τ*})/bigM, a sound lower bound for
// mSq(τ*).  Throws {NoFiniteTau} when the grid is exhausted.
ObservabilityCertificate certify_finite(const ValidatedSystem& sys, double beta, double omega,
                                        double rel_tol = kDefaultQuadTol);

struct RenormCheck {
    double min_eig = 0.0;
    bool ok = false; // min_eig >= -1e-10 · trace(G(∞))
};

// Consistency check of the contraction renorming: R = G(∞) - S(t)* G(∞) S(t)
// must be PSD (it equals G(t)).  Requires all Re λ > 0 and G(∞) positive
// definite; throws {NotInfiniteTimeAdmissible} or {NotExactlyObservable}.
RenormCheck renorm_contraction_check(const ValidatedSystem& sys, double t);

} // namespace obslab
