#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "obslab/gramian.hpp"
#include "obslab/system.hpp"

namespace obslab {

// Witness pair for backward-forward conditioning: M(η)² < m(τ)², η < τ,
// together with the derived lower bound on the backward norm,
// ‖T(η)x‖² >= (m(τ)² - M(η)²)/M(τ-η)² ‖x‖².
struct BfcCertificate {
    double eta = 0.0;
    double tau = 0.0;
    double MSq_eta = 0.0;
    double mSq_tau = 0.0;
    double margin = 0.0;         // mSq_tau - MSq_eta > 0
    double bfc_product = 0.0;    // sqrt(MSq_eta / mSq_tau) = ‖Ψ_τ^{-1}‖‖Ψ_η‖ < 1
    double backward_bound = 0.0; // margin / MSq(tau - eta)
};

struct BfcScanResult {
    std::optional<BfcCertificate> certificate;
    double best_margin = -std::numeric_limits<double>::infinity();

    bool found() const { return certificate.has_value(); }
};

// Grid search for the margin-maximizing pair; every eta is paired only with
// tau > eta.  Ties resolve by smaller eta, then smaller tau.
BfcScanResult bfc_scan(const ValidatedSystem& sys, const std::vector<double>& eta_grid,
                       const std::vector<double>& tau_grid);

// The default scan grid: log-spaced 1e-3 ... 1e2, 50 points.
std::vector<double> default_bfc_grid();

struct BackwardBoundCheck {
    double bound = 0.0; // (mSq_tau - MSq_eta)/MSq(tau - eta)
    double epsSq = 0.0; // epsilon_lower(eta)²
    bool ok = false;    // bound <= epsSq + 1e-10
};

BackwardBoundCheck backward_bound_check(const ValidatedSystem& sys, const BfcCertificate& cert);

enum class ZeroClassVerdict {
    ZeroClassEvidence,
    NotZeroClassEvidence,
    Inconclusive,
};

const char* zero_class_verdict_name(ZeroClassVerdict v);

// MSq(tau_small; N) for each truncation in N_list, plus a secondary sweep
// over shrinking tau used for the verdict.  Evidence only: a finite section
// cannot certify the tau → 0 limit of an infinite family.
struct ZeroClassReport {
    double tau_small = 0.0;
    std::vector<int> truncations;
    std::vector<double> MSq_at_tau;                // primary table, one per N
    std::vector<double> sweep_taus;                // tau_small / 4^k
    std::vector<std::vector<double>> sweep_MSq;    // [N index][sweep index]
    ZeroClassVerdict verdict = ZeroClassVerdict::Inconclusive;
};

using SystemBuilder = std::function<SpectralSystem(int)>;

ZeroClassReport zero_class_probe(const SystemBuilder& builder, double tau_small,
                                 const std::vector<int>& N_list);

} // namespace obslab
