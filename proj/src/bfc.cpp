#include "obslab/bfc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace obslab {

std::vector<double> default_bfc_grid() {
    std::vector<double> grid(50);
    for (int i = 0; i < 50; ++i) grid[static_cast<std::size_t>(i)] = 1e-3 * std::pow(1e5, i / 49.0);
    return grid;
}

namespace {

void check_grid_positive(const std::vector<double>& grid, const char* name) {
    for (double t : grid)
        if (!(t > 0.0) || !std::isfinite(t))
            throw InputError(ErrorCode::InvalidArgument,
                             std::string(name) + " grid entries must be positive and finite");
}

} // namespace

BfcScanResult bfc_scan(const ValidatedSystem& sys, const std::vector<double>& eta_grid,
                       const std::vector<double>& tau_grid) {
    check_grid_positive(eta_grid, "eta");
    check_grid_positive(tau_grid, "tau");

    // One window per distinct time; margins come from pairing afterwards.
    std::map<double, ObsWindow> windows;
    for (double t : eta_grid) windows.emplace(t, ObsWindow{});
    for (double t : tau_grid) windows.emplace(t, ObsWindow{});
    for (auto& [t, w] : windows) w = obs_window(sys, t);

    BfcScanResult result;
    bool have_pair = false;
    double best_margin = 0.0;
    double best_eta = 0.0;
    double best_tau = 0.0;
    for (double eta : eta_grid) {
        for (double tau : tau_grid) {
            if (!(eta < tau)) continue;
            const double margin = windows.at(tau).mSq - windows.at(eta).MSq;
            const bool better =
                !have_pair || margin > best_margin ||
                (margin == best_margin && (eta < best_eta || (eta == best_eta && tau < best_tau)));
            if (better) {
                have_pair = true;
                best_margin = margin;
                best_eta = eta;
                best_tau = tau;
            }
        }
    }
    if (!have_pair) return result; // best_margin stays -inf

    result.best_margin = best_margin;
    if (best_margin > 0.0) {
        BfcCertificate cert;
        cert.eta = best_eta;
        cert.tau = best_tau;
        cert.MSq_eta = windows.at(best_eta).MSq;
        cert.mSq_tau = windows.at(best_tau).mSq;
        cert.margin = best_margin;
        cert.bfc_product = std::sqrt(cert.MSq_eta / cert.mSq_tau);
        cert.backward_bound = best_margin / obs_window(sys, best_tau - best_eta).MSq;
        result.certificate = cert;
    }
    return result;
}

BackwardBoundCheck backward_bound_check(const ValidatedSystem& sys, const BfcCertificate& cert) {
    if (!(cert.eta < cert.tau) || !(cert.margin > 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument,
                                "backward bound check needs a certificate with eta < tau and "
                                "positive margin");
    BackwardBoundCheck out;
    out.bound = (cert.mSq_tau - cert.MSq_eta) / obs_window(sys, cert.tau - cert.eta).MSq;
    const double eps = epsilon_lower(sys, cert.eta);
    out.epsSq = eps * eps;
    out.ok = out.bound <= out.epsSq + 1e-10;
    return out;
}

const char* zero_class_verdict_name(ZeroClassVerdict v) {
    switch (v) {
        case ZeroClassVerdict::ZeroClassEvidence: return "zero_class_evidence";
        case ZeroClassVerdict::NotZeroClassEvidence: return "not_zero_class_evidence";
        case ZeroClassVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ZeroClassReport zero_class_probe(const SystemBuilder& builder, double tau_small,
                                 const std::vector<int>& N_list) {
    if (!(tau_small > 0.0) || !std::isfinite(tau_small))
        throw InputError(ErrorCode::InvalidArgument, "tau_small must be positive and finite");
    if (N_list.empty())
        throw InputError(ErrorCode::InvalidArgument, "N_list must not be empty");

    ZeroClassReport report;
    report.tau_small = tau_small;
    report.truncations = N_list;
    report.sweep_taus = {tau_small, tau_small / 4.0, tau_small / 16.0, tau_small / 64.0};

    for (int N : N_list) {
        const ValidatedSystem sys = validate_system(builder(N));
        std::vector<double> row;
        row.reserve(report.sweep_taus.size());
        for (double tau : report.sweep_taus) row.push_back(obs_window(sys, tau).MSq);
        report.MSq_at_tau.push_back(row.front());
        report.sweep_MSq.push_back(std::move(row));
    }

    // Uniform decay in tau: every truncation must lose at least a factor 4
    // across the 64-fold tau shrink.  The sup over modes does not commute
    // with tau -> 0, so both verdicts stay evidence, not proofs.
    double worst_ratio = 0.0;
    for (const auto& row : report.sweep_MSq) {
        const double first = row.front();
        const double last = row.back();
        worst_ratio = std::max(worst_ratio, first > 0.0 ? last / first : 0.0);
    }

    bool nondecreasing = true;
    for (std::size_t i = 1; i < report.MSq_at_tau.size(); ++i)
        if (report.MSq_at_tau[i] < report.MSq_at_tau[i - 1] * (1.0 - 1e-9)) nondecreasing = false;

    if (worst_ratio <= 0.25)
        report.verdict = ZeroClassVerdict::ZeroClassEvidence;
    else if (nondecreasing && report.MSq_at_tau.front() > 0.0 &&
             report.MSq_at_tau.back() >= 0.9 * report.MSq_at_tau.front())
        report.verdict = ZeroClassVerdict::NotZeroClassEvidence;
    else
        report.verdict = ZeroClassVerdict::Inconclusive;
    return report;
}

} // namespace obslab
