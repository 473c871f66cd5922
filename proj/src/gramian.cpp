#include "obslab/gramian.hpp"

#include <cmath>

#include "quadrature_detail.hpp"

namespace obslab {

namespace {

// (1 - e^{-w})/w, stable near w = 0.
Complex em1_over(Complex w) {
    if (std::abs(w) <= 0.5) {
        Complex term(1.0, 0.0);
        Complex sum = term;
        for (int k = 1; k < 32; ++k) {
            term *= -w / static_cast<double>(k + 1);
            sum += term;
            if (std::abs(term) <= 1e-20 * std::abs(sum)) break;
        }
        return sum;
    }
    return (1.0 - std::exp(-w)) / w;
}

} // namespace

Complex kernel_E(Complex z, double tau) {
    if (std::isinf(tau)) {
        if (!(z.real() > 0.0))
            throw PreconditionError(ErrorCode::DivergentKernel,
                                    "infinite-time kernel requires Re z > 0");
        return 1.0 / z;
    }
    if (!(tau >= 0.0))
        throw InputError(ErrorCode::InvalidArgument, "kernel time must be >= 0 or infinity");
    if (z == Complex(0.0, 0.0)) return Complex(tau, 0.0);
    return tau * em1_over(z * tau);
}

GramMatrix gram(const ValidatedSystem& sys, double tau) {
    if (!(tau > 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument, "gram requires tau > 0 or infinity");
    if (std::isinf(tau) && !(sys.min_re() > 0.0))
        throw PreconditionError(ErrorCode::NotInfiniteTimeAdmissible,
                                "infinite-time Gramian diverges: some Re(lambda_n + conj "
                                "lambda_m) <= 0");

    const Eigen::Index n = sys.mode_count();
    const auto& lambda = sys.eigenvalues();
    const auto& cg = sys.output_gram();

    GramMatrix result;
    result.tau = tau;
    result.entries.resize(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        result.entries(m, m) =
            Complex((cg(m, m) * kernel_E(2.0 * lambda(m).real(), tau)).real(), 0.0);
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const Complex val = cg(m, k) * kernel_E(lambda(k) + std::conj(lambda(m)), tau);
            result.entries(m, k) = val;
            result.entries(k, m) = std::conj(val);
        }
    }
    return result;
}

Eigen::VectorXd hermitian_spectrum(const Eigen::Ref<const Eigen::MatrixXcd>& G) {
    if (G.rows() != G.cols())
        throw InputError(ErrorCode::NotHermitian, "matrix is not square");
    const Eigen::Index n = G.rows();
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            if (std::abs(G(i, j) - std::conj(G(j, i))) > 1e-12 * scale)
                throw InputError(ErrorCode::NotHermitian,
                                 "matrix deviates from Hermitian symmetry at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
    return solver.eigenvalues();
}

std::pair<double, double> hermitian_extremal(const Eigen::Ref<const Eigen::MatrixXcd>& G) {
    const Eigen::VectorXd ev = hermitian_spectrum(G);
    return {ev(0), ev(ev.size() - 1)};
}

ObsWindow obs_window(const ValidatedSystem& sys, double tau) {
    const GramMatrix G = gram(sys, tau);
    const auto [lmin, lmax] = hermitian_extremal(G.entries);
    ObsWindow w;
    w.tau = tau;
    w.mSq = std::max(lmin, 0.0);
    w.MSq = std::max(lmax, w.mSq);
    return w;
}

std::vector<ObsWindow> window_scan(const ValidatedSystem& sys, const std::vector<double>& taus) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0))
            throw InputError(ErrorCode::InvalidArgument, "scan grid entries must be positive");
        if (i > 0 && !(taus[i] > taus[i - 1]))
            throw InputError(ErrorCode::InvalidArgument, "scan grid must be strictly increasing");
    }
    std::vector<ObsWindow> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        ObsWindow w = obs_window(sys, tau);
        if (!out.empty()) {
            const double slack = 1e-9;
            const ObsWindow& prev = out.back();
            if (w.mSq < prev.mSq - slack * (1.0 + prev.mSq) ||
                w.MSq < prev.MSq - slack * (1.0 + prev.MSq))
                throw NumericError(ErrorCode::MonotonicityViolation,
                                   "window values decreased along the tau grid");
        }
        out.push_back(w);
    }
    return out;
}

double quadratic_form(const Eigen::Ref<const Eigen::MatrixXcd>& G, const StateVector& x) {
    if (G.rows() != G.cols() || G.rows() != x.size())
        throw InputError(ErrorCode::SchemaViolation, "quadratic form dimension mismatch");
    // Fixed (m, n) order with Neumaier compensation: identical result run to
    // run and independent of any future parallel split.
    double sum = 0.0;
    double comp = 0.0;
    const Eigen::Index n = x.size();
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double term = (std::conj(x(m)) * G(m, k) * x(k)).real();
            const double t = sum + term;
            if (std::abs(sum) >= std::abs(term))
                comp += (sum - t) + term;
            else
                comp += (term - t) + sum;
            sum = t;
        }
    }
    return sum + comp;
}

double trajectory_energy_quadrature(const ValidatedSystem& sys, const StateVector& x, double tau,
                                    double rel_tol) {
    if (!std::isfinite(tau) || !(tau >= 0.0))
        throw InputError(ErrorCode::InvalidArgument, "quadrature requires finite tau >= 0");
    if (!(rel_tol > 0.0) || rel_tol > 1e-4)
        throw InputError(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1e-4]");
    const auto f = [&](double t) { return output_energy_density(sys, t, x); };
    return detail::adaptive_simpson(f, 0.0, tau, rel_tol, 48);
}

} // namespace obslab
