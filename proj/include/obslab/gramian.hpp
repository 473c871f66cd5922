#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "obslab/system.hpp"

namespace obslab {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Observability Gramian over [0, tau] (tau may be kInfiniteTime):
// entries(m,n) = <CU_n, CU_m>_Y · E(λ_n + conj(λ_m), tau), Hermitian PSD,
// and x^H G x = ∫_0^tau ‖C T(t) x‖² dt.
struct GramMatrix {
    double tau = 0.0;
    Eigen::MatrixXcd entries;
};

// Extremal eigenvalues of the Gramian on the truncated span.  mSq is an
// upper bound of the full-family m(tau)², MSq a lower bound of the
// full-family M(tau)².
struct ObsWindow {
    double tau = 0.0;
    double mSq = 0.0;
    double MSq = 0.0;
};

// ∫_0^tau e^{-z t} dt in closed form: (1 - e^{-z tau})/z for z != 0, tau at
// z = 0, 1/z for tau = infinity (requires Re z > 0, else PreconditionError
// with code DivergentKernel).
Complex kernel_E(Complex z, double tau);

GramMatrix gram(const ValidatedSystem& sys, double tau);

// Extremal eigenvalues (min, max) of a Hermitian matrix.  Hermiticity is
// checked to 1e-12 relative; the decomposition is deterministic for a fixed
// input.  Throws InputError{NotHermitian} or NumericError{NoConvergence}.
std::pair<double, double> hermitian_extremal(const Eigen::Ref<const Eigen::MatrixXcd>& G);

// Full spectrum, ascending.  Same checks as hermitian_extremal.
Eigen::VectorXd hermitian_spectrum(const Eigen::Ref<const Eigen::MatrixXcd>& G);

ObsWindow obs_window(const ValidatedSystem& sys, double tau);

// One window per grid point; the grid must be strictly increasing and
// positive.  Monotonicity of both mSq and MSq along the grid is asserted
// (NumericError{MonotonicityViolation} far beyond rounding slack).
std::vector<ObsWindow> window_scan(const ValidatedSystem& sys, const std::vector<double>& taus);

// x^H G x with a fixed summation order and compensated accumulation, so the
// value is identical run to run.
double quadratic_form(const Eigen::Ref<const Eigen::MatrixXcd>& G, const StateVector& x);

// Independent quadrature oracle for ∫_0^tau ‖C T(t) x‖² dt (adaptive
// Simpson on the output energy density).  Used by tests to validate gram;
// rel_tol must lie in (0, 1e-4].
double trajectory_energy_quadrature(const ValidatedSystem& sys, const StateVector& x, double tau,
                                    double rel_tol);

} // namespace obslab
