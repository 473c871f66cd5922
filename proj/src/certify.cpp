#include "obslab/certify.hpp"

#include <cmath>
#include <numbers>

#include "obslab/gramian.hpp"

namespace obslab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Relative floor below which λ_min(D) counts as zero (rank-deficient D).
constexpr double kDeltaSqFloor = 1e-12;

Eigen::MatrixXcd coercivity_matrix(const ValidatedSystem& sys, double beta) {
    if (!sys.injective())
        throw PreconditionError(ErrorCode::ZeroEigenvalue,
                                "delta_lower requires an injective system");
    if (!(beta > 0.0 && beta < 1.0))
        throw InputError(ErrorCode::InvalidArgument, "beta must lie in (0, 1)");
    const Eigen::Index n = sys.mode_count();
    Eigen::VectorXcd w(n);
    for (Eigen::Index i = 0; i < n; ++i)
        w(i) = std::exp(-(1.0 - beta) * std::log(sys.eigenvalues()(i)));
    // D = diag(w)^H C-Gram diag(w): congruence keeps the Hermitian PSD shape.
    Eigen::MatrixXcd D(n, n);
    const auto& cg = sys.output_gram();
    for (Eigen::Index m = 0; m < n; ++m) {
        D(m, m) = Complex(cg(m, m).real() * std::norm(w(m)), 0.0);
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const Complex val = cg(m, k) * std::conj(w(m)) * w(k);
            D(m, k) = val;
            D(k, m) = std::conj(val);
        }
    }
    return D;
}

ObservabilityCertificate make_infinite_certificate(const ValidatedSystem& sys, double beta,
                                                   double rel_tol) {
    const SquareFnReport report = squarefn_report(sys, beta, rel_tol);
    if (!report.holds || !report.KSq)
        throw PreconditionError(ErrorCode::SquareFunctionFails,
                                "square-function estimate fails on the declared family");

    const Eigen::MatrixXcd D = coercivity_matrix(sys, beta);
    const double lmin = hermitian_extremal(D).first;
    const double trace = D.diagonal().real().sum();
    const double deltaSq = std::max(lmin, 0.0);
    if (deltaSq <= kDeltaSqFloor * std::max(trace / static_cast<double>(D.rows()), 1e-300))
        throw PreconditionError(ErrorCode::DeltaZero, "coercivity constant vanishes");

    ObservabilityCertificate cert;
    cert.beta = beta;
    cert.delta = std::sqrt(deltaSq);
    cert.KSq = *report.KSq;
    cert.mCertSq = 2.0 * beta * deltaSq / (cert.KSq * kLn2);
    return cert;
}

SpectralSystem shifted_copy(const ValidatedSystem& sys, double omega) {
    SpectralSystem shifted;
    shifted.label = sys.label() + "+shift";
    shifted.metadata = sys.metadata();
    const Eigen::Index n = sys.mode_count();
    shifted.modes.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        shifted.modes[static_cast<std::size_t>(i)].lambda = sys.eigenvalues()(i) + omega;
    shifted.observation = CGramObservation{sys.output_gram()};
    return shifted;
}

} // namespace

double delta_lower(const ValidatedSystem& sys, double beta) {
    const Eigen::MatrixXcd D = coercivity_matrix(sys, beta);
    return std::sqrt(std::max(hermitian_extremal(D).first, 0.0));
}

ObservabilityCertificate certify_infinite(const ValidatedSystem& sys, double beta,
                                          double rel_tol) {
    return make_infinite_certificate(sys, beta, rel_tol);
}

ObservabilityCertificate certify_finite(const ValidatedSystem& sys, double beta, double omega,
                                        double rel_tol) {
    if (!(omega > 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument, "certify_finite requires omega > 0");

    const ValidatedSystem shifted = validate_system(shifted_copy(sys, omega), true);
    ObservabilityCertificate cert = make_infinite_certificate(shifted, beta, rel_tol);
    const double bigM = 1.0 / cert.mCertSq; // ln2 K² / (2 β δ²)

    // M' is the infinite-time admissibility constant of the shifted system;
    // the model semigroup is contractive, so M'' = M'.
    const double Mprime = hermitian_extremal(gram(shifted, kInfiniteTime).entries).second;
    const double Msecond = Mprime;

    // Smallest grid time closing bigM M'' e^{-ω τ} <= 1/2.
    const int grid_points = 200;
    for (int k = 0; k < grid_points; ++k) {
        const double tau = 1e-2 * std::pow(1e4, static_cast<double>(k + 1) / grid_points);
        const double residual = bigM * Msecond * std::exp(-omega * tau);
        if (residual <= 0.5) {
            cert.finite = FiniteTimeScope{omega, tau, (1.0 - residual) * cert.mCertSq};
            return cert;
        }
    }
    throw PreconditionError(ErrorCode::NoFiniteTau,
                            "residual bigM*M''*e^{-omega tau} stays above 1/2 on (1e-2, 1e2]");
}

RenormCheck renorm_contraction_check(const ValidatedSystem& sys, double t) {
    if (!(t >= 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument, "renorm check requires t >= 0");
    if (!(sys.min_re() > 0.0))
        throw PreconditionError(ErrorCode::NotInfiniteTimeAdmissible,
                                "infinite-time Gramian diverges: some Re(lambda_n + conj "
                                "lambda_m) <= 0");
    const GramMatrix Ginf = gram(sys, kInfiniteTime);
    const double trace = Ginf.entries.diagonal().real().sum();
    const double lmin = hermitian_extremal(Ginf.entries).first;
    if (lmin <= 1e-12 * std::max(trace, 1e-300))
        throw PreconditionError(ErrorCode::NotExactlyObservable,
                                "G(infinity) is singular: norms are not equivalent");

    // R = G(∞) - S(t)* G(∞) S(t), entrywise G(∞)(m,n) (1 - e^{-(λ_n + conj λ_m) t}).
    const Eigen::Index n = sys.mode_count();
    Eigen::MatrixXcd R(n, n);
    const auto& lambda = sys.eigenvalues();
    for (Eigen::Index m = 0; m < n; ++m) {
        R(m, m) = Complex(
            Ginf.entries(m, m).real() * (1.0 - std::exp(-2.0 * lambda(m).real() * t)), 0.0);
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const Complex decay = std::exp(-(lambda(k) + std::conj(lambda(m))) * t);
            const Complex val = Ginf.entries(m, k) * (1.0 - decay);
            R(m, k) = val;
            R(k, m) = std::conj(val);
        }
    }

    RenormCheck out;
    out.min_eig = hermitian_extremal(R).first;
    out.ok = out.min_eig >= -1e-10 * trace;
    return out;
}

} // namespace obslab
