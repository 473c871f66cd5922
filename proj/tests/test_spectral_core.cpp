#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "obslab/gramian.hpp"
#include "obslab/scenario.hpp"
#include "obslab/system.hpp"
#include "oracles.hpp"

using namespace obslab;
namespace {
constexpr double kPi = std::numbers::pi;

SpectralSystem single_mode(Complex lambda, Complex c = {1.0, 0.0}) {
    SpectralSystem sys;
    sys.label = "single";
    ObservedMode mode;
    mode.lambda = lambda;
    mode.obs = Eigen::VectorXcd::Constant(1, c);
    sys.modes.push_back(mode);
    sys.observation = VectorObservation{1};
    return sys;
}
} // namespace

TEST_CASE("validate_system accepts the demo families") {
    CHECK_NOTHROW(demo_system("heat1d", 8));
    CHECK_NOTHROW(demo_system("wave", 8));
    CHECK_NOTHROW(demo_system("schrodinger1d", 8));

    const ValidatedSystem heat = demo_system("heat1d", 3);
    CHECK(heat.mode_count() == 3);
    CHECK(heat.output_gram()(0, 0).real() == doctest::Approx(kPi * kPi).epsilon(1e-15));
    CHECK(heat.metadata().re_spectrum_unbounded);
    CHECK(heat.metadata().compact_resolvent);
}

TEST_CASE("validate_system rejects bad input") {
    SUBCASE("zero eigenvalue with injectivity required") {
        const SpectralSystem sys = single_mode({0.0, 0.0});
        CHECK_NOTHROW(validate_system(sys));
        try {
            validate_system(sys, true);
            FAIL("expected ZeroEigenvalue");
        } catch (const InputError& e) {
            CHECK(e.code() == ErrorCode::ZeroEigenvalue);
        }
    }
    SUBCASE("indefinite cgram") {
        SpectralSystem sys;
        sys.label = "bad";
        sys.modes.resize(2);
        sys.modes[0].lambda = {1.0, 0.0};
        sys.modes[1].lambda = {2.0, 0.0};
        Eigen::MatrixXcd cg(2, 2);
        cg << 1.0, 2.0, 2.0, 1.0; // eigenvalues 3 and -1
        sys.observation = CGramObservation{cg};
        try {
            validate_system(sys);
            FAIL("expected NotPSD");
        } catch (const InputError& e) {
            CHECK(e.code() == ErrorCode::NotPSD);
        }
    }
    SUBCASE("negative real part") {
        try {
            validate_system(single_mode({-0.1, 1.0}));
            FAIL("expected NegativeRealPart");
        } catch (const InputError& e) {
            CHECK(e.code() == ErrorCode::NegativeRealPart);
        }
    }
    SUBCASE("no modes") {
        SpectralSystem sys;
        sys.observation = VectorObservation{1};
        CHECK_THROWS_AS(validate_system(sys), InputError);
    }
    SUBCASE("ragged observation vectors") {
        SpectralSystem sys = single_mode({1.0, 0.0});
        ObservedMode extra;
        extra.lambda = {2.0, 0.0};
        extra.obs = Eigen::VectorXcd::Ones(2);
        sys.modes.push_back(extra);
        CHECK_THROWS_AS(validate_system(sys), InputError);
    }
    SUBCASE("non-Hermitian cgram") {
        SpectralSystem sys;
        sys.modes.resize(2);
        sys.modes[0].lambda = {1.0, 0.0};
        sys.modes[1].lambda = {2.0, 0.0};
        Eigen::MatrixXcd cg(2, 2);
        cg << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
        sys.observation = CGramObservation{cg};
        try {
            validate_system(sys);
            FAIL("expected NotPSD");
        } catch (const InputError& e) {
            CHECK(e.code() == ErrorCode::NotPSD);
        }
    }
}

TEST_CASE("semigroup_apply is the diagonal action") {
    const ValidatedSystem heat = demo_system("heat1d", 4);
    StateVector phi1 = StateVector::Zero(4);
    phi1(0) = 1.0;

    SUBCASE("t = 0 is the identity") {
        const StateVector y = semigroup_apply(heat, 0.0, phi1);
        CHECK(y(0) == Complex(1.0, 0.0));
        CHECK(y(1) == Complex(0.0, 0.0));
    }
    SUBCASE("heat mode decays like e^{-pi^2 t}") {
        const StateVector y = semigroup_apply(heat, 1.0, phi1);
        CHECK(y(0).real() == doctest::Approx(std::exp(-kPi * kPi)).epsilon(1e-14));
        CHECK(y(0).imag() == 0.0);
    }
    SUBCASE("wave group preserves the norm") {
        const ValidatedSystem wave = demo_system("wave", 4);
        std::mt19937_64 rng(7);
        for (int it = 0; it < 20; ++it) {
            const StateVector x = oracles::random_state(rng, wave.mode_count());
            const double t = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
            CHECK(semigroup_apply(wave, t, x).norm() == doctest::Approx(x.norm()).epsilon(1e-13));
        }
    }
    SUBCASE("negative time is rejected") {
        CHECK_THROWS_AS(semigroup_apply(heat, -1.0, phi1), PreconditionError);
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(semigroup_apply(heat, 1.0, StateVector::Zero(3)), InputError);
    }
}

TEST_CASE("semigroup property T(t+s) = T(t) T(s)") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        const ValidatedSystem sys = validate_system(oracles::random_system(rng));
        const StateVector x = oracles::random_state(rng, sys.mode_count());
        std::uniform_real_distribution<double> t_dist(0.0, 10.0);
        const double t = t_dist(rng);
        const double s = t_dist(rng);
        const StateVector once = semigroup_apply(sys, t + s, x);
        const StateVector twice = semigroup_apply(sys, t, semigroup_apply(sys, s, x));
        CHECK((once - twice).norm() <= 1e-12 * (1.0 + once.norm()));
    }
}

TEST_CASE("output_energy_density") {
    const ValidatedSystem heat = demo_system("heat1d", 4);
    StateVector phi1 = StateVector::Zero(4);
    phi1(0) = 1.0;
    CHECK(output_energy_density(heat, 0.0, phi1) == doctest::Approx(kPi * kPi).epsilon(1e-14));
    CHECK(output_energy_density(heat, 0.3, StateVector::Zero(4)) == 0.0);

    const ValidatedSystem wave = demo_system("wave", 3);
    for (Eigen::Index k = 0; k < wave.mode_count(); ++k) {
        StateVector phi = StateVector::Zero(wave.mode_count());
        phi(k) = 1.0;
        for (double t : {0.0, 0.37, 2.0, 9.5})
            CHECK(output_energy_density(wave, t, phi) == doctest::Approx(1.0).epsilon(1e-13));
    }

    std::mt19937_64 rng(23);
    for (int it = 0; it < 40; ++it) {
        const ValidatedSystem sys = validate_system(oracles::random_system(rng));
        const StateVector x = oracles::random_state(rng, sys.mode_count());
        const double t = std::uniform_real_distribution<double>(0.0, 5.0)(rng);
        CHECK(output_energy_density(sys, t, x) >= -1e-12);
    }
}

TEST_CASE("epsilon_lower") {
    const ValidatedSystem wave = demo_system("wave", 5);
    for (double t : {0.0, 1.0, 17.0}) CHECK(epsilon_lower(wave, t) == 1.0);

    const ValidatedSystem heat3 = demo_system("heat1d", 3);
    CHECK(epsilon_lower(heat3, 1.0) ==
          doctest::Approx(std::exp(-9.0 * kPi * kPi)).epsilon(1e-14));
    CHECK(epsilon_lower(heat3, 0.0) == 1.0);

    // Submultiplicativity over random pairs.  Rounding t + s before the exp
    // perturbs the result by ~|exponent| ulps, hence the scaled slack.
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> t_dist(0.0, 4.0);
    for (int it = 0; it < 200; ++it) {
        const double t = t_dist(rng);
        const double s = t_dist(rng);
        const double lhs = epsilon_lower(heat3, t + s);
        const double rhs = epsilon_lower(heat3, t) * epsilon_lower(heat3, s);
        const double slack = 1e-15 * (2.0 + (t + s) * heat3.max_re());
        CHECK(lhs >= rhs * (1.0 - slack));
    }
}
