#include "obslab/system.hpp"

#include <cmath>
#include <limits>

#include "obslab/gramian.hpp"

namespace obslab {

namespace {

Eigen::MatrixXcd materialize_output_gram(const SpectralSystem& sys) {
    const auto n = static_cast<Eigen::Index>(sys.modes.size());

    if (const auto* vecs = std::get_if<VectorObservation>(&sys.observation)) {
        const Eigen::Index p = vecs->output_dim;
        if (p < 1)
            throw InputError(ErrorCode::SchemaViolation, "output_dim must be >= 1 in vector form");
        Eigen::MatrixXcd V(p, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& obs = sys.modes[static_cast<std::size_t>(j)].obs;
            if (obs.size() != p)
                throw InputError(ErrorCode::SchemaViolation,
                                 "modes[" + std::to_string(j) + "].obs has length " +
                                     std::to_string(obs.size()) + ", expected " + std::to_string(p));
            V.col(j) = obs;
        }
        // (m,n) entry is CU_m^H CU_n = <CU_n, CU_m>_Y; Hermitian PSD by construction.
        Eigen::MatrixXcd G = V.adjoint() * V;
        for (Eigen::Index i = 0; i < n; ++i) G(i, i) = Complex(G(i, i).real(), 0.0);
        return G;
    }

    const auto& cg = std::get<CGramObservation>(sys.observation).entries;
    if (cg.rows() != n || cg.cols() != n)
        throw InputError(ErrorCode::SchemaViolation,
                         "cgram is " + std::to_string(cg.rows()) + "x" + std::to_string(cg.cols()) +
                             ", expected " + std::to_string(n) + "x" + std::to_string(n));
    for (const auto& mode : sys.modes)
        if (mode.obs.size() != 0)
            throw InputError(ErrorCode::SchemaViolation,
                             "per-mode obs must be absent when a cgram is given");

    const double scale = cg.cwiseAbs().maxCoeff();
    const double herm_tol = 1e-12 * std::max(1.0, scale);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j)
            if (std::abs(cg(i, j) - std::conj(cg(j, i))) > herm_tol)
                throw InputError(ErrorCode::NotPSD, "cgram is not Hermitian at (" +
                                                        std::to_string(i) + "," + std::to_string(j) +
                                                        ")");

    // Symmetrize exactly so downstream code can rely on G(i,j) == conj(G(j,i)).
    Eigen::MatrixXcd G(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        G(i, i) = Complex(cg(i, i).real(), 0.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            G(i, j) = cg(i, j);
            G(j, i) = std::conj(cg(i, j));
        }
    }

    const double trace = G.diagonal().real().sum();
    const double min_eig = hermitian_extremal(G).first;
    if (min_eig < -1e-10 * std::max(trace, 1e-300))
        throw InputError(ErrorCode::NotPSD, "cgram has negative eigenvalue " +
                                                std::to_string(min_eig) + " (trace " +
                                                std::to_string(trace) + ")");
    return G;
}

} // namespace

ValidatedSystem validate_system(const SpectralSystem& sys, bool injective_required) {
    if (sys.modes.empty())
        throw InputError(ErrorCode::SchemaViolation, "modes must contain at least one entry");

    ValidatedSystem out;
    out.label_ = sys.label;
    out.metadata_ = sys.metadata;

    const auto n = static_cast<Eigen::Index>(sys.modes.size());
    out.lambdas_.resize(n);
    out.max_re_ = -std::numeric_limits<double>::infinity();
    out.min_re_ = std::numeric_limits<double>::infinity();
    out.injective_ = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lambda = sys.modes[static_cast<std::size_t>(i)].lambda;
        if (!(lambda.real() >= 0.0))
            throw InputError(ErrorCode::NegativeRealPart,
                             "modes[" + std::to_string(i) + "].lambda has Re < 0");
        if (lambda == Complex(0.0, 0.0)) {
            out.injective_ = false;
            if (injective_required)
                throw InputError(ErrorCode::ZeroEigenvalue,
                                 "modes[" + std::to_string(i) + "].lambda is zero");
        }
        out.lambdas_(i) = lambda;
        out.max_re_ = std::max(out.max_re_, lambda.real());
        out.min_re_ = std::min(out.min_re_, lambda.real());
    }

    out.output_gram_ = materialize_output_gram(sys);
    return out;
}

StateVector semigroup_apply(const ValidatedSystem& sys, double t, const StateVector& x) {
    if (!(t >= 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument, "semigroup time must be >= 0");
    if (x.size() != sys.mode_count())
        throw InputError(ErrorCode::SchemaViolation, "state has " + std::to_string(x.size()) +
                                                         " coefficients, system has " +
                                                         std::to_string(sys.mode_count()));
    return (-t * sys.eigenvalues()).array().exp() * x.array();
}

double output_energy_density(const ValidatedSystem& sys, double t, const StateVector& x) {
    const StateVector xt = semigroup_apply(sys, t, x);
    return quadratic_form(sys.output_gram(), xt);
}

double epsilon_lower(const ValidatedSystem& sys, double t) {
    if (!(t >= 0.0))
        throw PreconditionError(ErrorCode::InvalidArgument, "semigroup time must be >= 0");
    return std::exp(-t * sys.max_re());
}

} // namespace obslab
