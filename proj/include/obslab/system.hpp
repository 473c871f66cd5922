#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "obslab/errors.hpp"

namespace obslab {

using Complex = std::complex<double>;

// State in the orthonormal eigenbasis: coefficient vector with
// ‖x‖² = Σ |α_n|².
using StateVector = Eigen::VectorXcd;

// One observed mode: eigenvalue λ of the generator A (semigroup acts as
// e^{-λt} on the mode) and, in the per-mode form, the output element CU_n.
struct ObservedMode {
    Complex lambda;
    Eigen::VectorXcd obs; // size p; empty when observation is a system-level C-Gram
};

// Observation given as per-mode output vectors in C^p.
struct VectorObservation {
    Eigen::Index output_dim = 0; // p >= 1
};

// Observation given directly as the Gram matrix of the output elements,
// entries(m,n) = <CU_n, CU_m>_Y.
struct CGramObservation {
    Eigen::MatrixXcd entries;
};

using ObservationData = std::variant<VectorObservation, CGramObservation>;

// Declared facts about the un-truncated family; they cannot be computed from
// a finite section and only enter consistency rules.
struct SystemMetadata {
    bool re_spectrum_unbounded = false;
    bool compact_resolvent = false;
};

// A finite section of an observed diagonal system (A, C): modes in input
// order, observation data, and family declarations.
struct SpectralSystem {
    std::string label;
    std::vector<ObservedMode> modes;
    ObservationData observation = VectorObservation{1};
    SystemMetadata metadata;
};

// A SpectralSystem that passed validation, with the effective C-Gram
// materialized.  All downstream operations take this type.
class ValidatedSystem {
  public:
    const std::string& label() const { return label_; }
    Eigen::Index mode_count() const { return lambdas_.size(); }
    const Eigen::VectorXcd& eigenvalues() const { return lambdas_; }

    // <CU_n, CU_m>_Y at (m, n); Hermitian positive semidefinite.
    const Eigen::MatrixXcd& output_gram() const { return output_gram_; }

    const SystemMetadata& metadata() const { return metadata_; }

    double max_re() const { return max_re_; }
    double min_re() const { return min_re_; }
    bool injective() const { return injective_; }

    friend ValidatedSystem validate_system(const SpectralSystem& sys, bool injective_required);

  private:
    std::string label_;
    Eigen::VectorXcd lambdas_;
    Eigen::MatrixXcd output_gram_;
    SystemMetadata metadata_;
    double max_re_ = 0.0;
    double min_re_ = 0.0;
    bool injective_ = false;
};

// Checks the standing hypotheses of the model (Re λ >= 0 for a bounded
// semigroup, Hermitian PSD observation Gram, λ != 0 when injectivity is
// required) and materializes the effective C-Gram.
//
// Throws InputError with code NegativeRealPart, NotPSD, ZeroEigenvalue or
// SchemaViolation.
ValidatedSystem validate_system(const SpectralSystem& sys, bool injective_required = false);

// Coefficients of T(t)x: α_n ↦ e^{-λ_n t} α_n.  t must be >= 0.
StateVector semigroup_apply(const ValidatedSystem& sys, double t, const StateVector& x);

// ‖C T(t) x‖_Y², the integrand of the observability quadratic forms.
double output_energy_density(const ValidatedSystem& sys, double t, const StateVector& x);

// ε(t) = inf_{‖x‖=1} ‖T(t)x‖; exact for the diagonal orthonormal model:
// e^{-t · max_n Re λ_n}.
double epsilon_lower(const ValidatedSystem& sys, double t);

} // namespace obslab
