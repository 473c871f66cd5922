#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "obslab/certify.hpp"
#include "obslab/gramian.hpp"
#include "obslab/scenario.hpp"
#include "oracles.hpp"

using namespace obslab;
namespace {
constexpr double kPi = std::numbers::pi;
const double kI0 = 10.0 * std::log(2.0) - 6.0 * std::log(3.0);

SpectralSystem scaled_heat(int N, double obs_scale) {
    Scenario sc = build_demo("heat1d", N);
    for (auto& row : *sc.cgram)
        for (auto& entry : row) entry[0] *= obs_scale;
    return to_system(sc);
}
} // namespace

TEST_CASE("delta_lower closed forms") {
    CHECK(delta_lower(demo_system("heat1d", 6), 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(delta_lower(demo_system("schrodinger1d", 6), 0.5) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // D = diag(1/(n pi)) at beta = 1/4, so delta = (N pi)^{-1/2}.
    for (int N : {4, 16}) {
        CHECK(delta_lower(demo_system("heat1d", N), 0.25) ==
              doctest::Approx(1.0 / std::sqrt(N * kPi)).epsilon(1e-12));
    }
    SUBCASE("alternative reading of the coercivity gives the same constant") {
        // For diagonal systems min_n cgram(n,n)|λ_n|^{-2(1-β)} equals
        // min_n [cgram(n,n)|λ_n|^{-2}] / |λ_n|^{-2β}.
        const ValidatedSystem heat = demo_system("heat1d", 8);
        for (double beta : {0.25, 0.5, 0.75}) {
            double direct = std::numeric_limits<double>::infinity();
            double ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index n = 0; n < heat.mode_count(); ++n) {
                const double c = heat.output_gram()(n, n).real();
                const double mod = std::abs(heat.eigenvalues()(n));
                direct = std::min(direct, c * std::pow(mod, -2.0 * (1.0 - beta)));
                ratio = std::min(ratio, c * std::pow(mod, -2.0) / std::pow(mod, -2.0 * beta));
            }
            CHECK(oracles::rel_diff(direct, ratio) <= 1e-12);
            CHECK(delta_lower(heat, beta) == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
        }
    }
    SUBCASE("requires injectivity") {
        SpectralSystem sys;
        ObservedMode mode;
        mode.lambda = {0.0, 0.0};
        mode.obs = Eigen::VectorXcd::Ones(1);
        sys.modes.push_back(mode);
        sys.observation = VectorObservation{1};
        CHECK_THROWS_AS(delta_lower(validate_system(sys), 0.5), PreconditionError);
    }
}

TEST_CASE("certify_infinite on heat1d is tight to 2 percent") {
    for (int N : {2, 8, 16}) {
        const ValidatedSystem heat = demo_system("heat1d", N);
        const ObservabilityCertificate cert = certify_infinite(heat, 0.5);
        CHECK(cert.delta == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cert.mCertSq == doctest::Approx(kI0 / std::numbers::ln2).epsilon(1e-8));
        CHECK(std::abs(cert.mCertSq - 0.490225) <= 1e-4);
        const double mInfSq = obs_window(heat, kInfiniteTime).mSq;
        CHECK(mInfSq == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(cert.mCertSq <= mInfSq);
        CHECK_FALSE(cert.finite.has_value());
    }
}

TEST_CASE("certify_infinite on schrodinger1d crosses at 1/(pi ln 2)") {
    const ValidatedSystem schro = demo_system("schrodinger1d", 16);
    const ObservabilityCertificate cert = certify_infinite(schro, 0.5);
    CHECK(cert.mCertSq == doctest::Approx(kPi / std::numbers::ln2).epsilon(1e-9));

    // mSq(tau) = pi^2 tau: locate the crossing by scan + linear interpolation.
    std::vector<double> grid;
    for (double t = 0.40; t <= 0.521; t += 0.005) grid.push_back(t);
    const auto windows = window_scan(schro, grid);
    double crossing = 0.0;
    for (std::size_t i = 1; i < windows.size(); ++i) {
        if (windows[i - 1].mSq < cert.mCertSq && windows[i].mSq >= cert.mCertSq) {
            const double slope =
                (windows[i].mSq - windows[i - 1].mSq) / (windows[i].tau - windows[i - 1].tau);
            crossing = windows[i - 1].tau + (cert.mCertSq - windows[i - 1].mSq) / slope;
            break;
        }
    }
    CHECK(std::abs(crossing - 1.0 / (kPi * std::numbers::ln2)) <= 1e-9);
    CHECK(std::abs(crossing - 0.4592) <= 1e-3);
}

TEST_CASE("certify_infinite error paths") {
    SUBCASE("family square-function failure") {
        try {
            certify_infinite(demo_system("heat1d", 16), 0.75);
            FAIL("expected SquareFunctionFails");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::SquareFunctionFails);
        }
    }
    SUBCASE("rank-deficient observation gives DeltaZero") {
        SpectralSystem sys;
        sys.modes.resize(2);
        sys.modes[0].lambda = {kPi * kPi, 0.0};
        sys.modes[1].lambda = {4.0 * kPi * kPi, 0.0};
        Eigen::MatrixXcd cg = Eigen::MatrixXcd::Zero(2, 2);
        cg(0, 0) = kPi * kPi; // second mode unobserved
        sys.observation = CGramObservation{cg};
        try {
            certify_infinite(validate_system(sys), 0.5);
            FAIL("expected DeltaZero");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::DeltaZero);
        }
    }
    SUBCASE("wave demo has a rank-one observation Gram, hence DeltaZero") {
        try {
            certify_infinite(demo_system("wave", 4), 0.5);
            FAIL("expected DeltaZero");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::DeltaZero);
        }
    }
}

TEST_CASE("mCertSq responds monotonically to delta and KSq") {
    // Scaling the observation by 4 doubles delta and leaves K^2 unchanged.
    const ObservabilityCertificate base = certify_infinite(demo_system("heat1d", 6), 0.5);
    const ObservabilityCertificate scaled =
        certify_infinite(validate_system(scaled_heat(6, 4.0)), 0.5);
    CHECK(scaled.delta == doctest::Approx(2.0 * base.delta).epsilon(1e-12));
    CHECK(scaled.KSq == doctest::Approx(base.KSq).epsilon(1e-12));
    CHECK(scaled.mCertSq == doctest::Approx(4.0 * base.mCertSq).epsilon(1e-12));
    CHECK(scaled.mCertSq > base.mCertSq);
}

TEST_CASE("certificate soundness on random decaying systems") {
    std::mt19937_64 rng(1709);
    oracles::RandomSystemOptions opt;
    opt.min_re = 0.3;
    opt.max_modes = 5;
    opt.min_output_dim = 5; // keep the coercivity matrix full rank
    opt.max_output_dim = 7;
    int certified = 0;
    for (int it = 0; it < 30; ++it) {
        const ValidatedSystem sys = validate_system(oracles::random_system(rng, opt));
        ObservabilityCertificate cert;
        try {
            cert = certify_infinite(sys, 0.5);
        } catch (const PreconditionError&) {
            continue;
        }
        ++certified;
        const double mInfSq = obs_window(sys, kInfiniteTime).mSq;
        CHECK(cert.mCertSq <= mInfSq + 1e-9);
    }
    CHECK(certified >= 10);
}

TEST_CASE("certify_finite closes the shifted estimate") {
    SUBCASE("schrodinger with omega = 1") {
        const ValidatedSystem schro = demo_system("schrodinger1d", 16);
        const ObservabilityCertificate cert = certify_finite(schro, 0.5, 1.0);
        REQUIRE(cert.finite.has_value());
        const double bigM = 1.0 / cert.mCertSq;
        // The grid point must satisfy the stopping rule, and the claimed
        // window constant must be sound against the Gramian.
        CHECK(cert.finite->tau_star > 0.0);
        CHECK(cert.finite->mFiniteSq > 0.0);
        CHECK(cert.finite->mFiniteSq <= obs_window(schro, cert.finite->tau_star).mSq + 1e-9);
        CHECK(cert.finite->mFiniteSq >= 0.5 / bigM - 1e-12);
    }
    SUBCASE("heat with omega = 1") {
        const ValidatedSystem heat = demo_system("heat1d", 16);
        const ObservabilityCertificate cert = certify_finite(heat, 0.5, 1.0);
        REQUIRE(cert.finite.has_value());
        CHECK(cert.finite->mFiniteSq <= obs_window(heat, cert.finite->tau_star).mSq + 1e-9);
    }
    SUBCASE("omega must be positive") {
        CHECK_THROWS_AS(certify_finite(demo_system("heat1d", 4), 0.5, 0.0), PreconditionError);
        CHECK_THROWS_AS(certify_finite(demo_system("heat1d", 4), 0.5, -1.0), PreconditionError);
    }
    SUBCASE("wave demo fails with DeltaZero even after the shift") {
        try {
            certify_finite(demo_system("wave", 4), 0.5, 1.0);
            FAIL("expected DeltaZero");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::DeltaZero);
        }
    }
}

TEST_CASE("renorm_contraction_check") {
    SUBCASE("heat1d windows stay PSD") {
        const ValidatedSystem heat = demo_system("heat1d", 8);
        for (double t : {0.1, 1.0, 5.0}) {
            const RenormCheck check = renorm_contraction_check(heat, t);
            CHECK(check.ok);
        }
    }
    SUBCASE("wave has no infinite-time Gramian") {
        try {
            renorm_contraction_check(demo_system("wave", 4), 1.0);
            FAIL("expected NotInfiniteTimeAdmissible");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::NotInfiniteTimeAdmissible);
        }
    }
    SUBCASE("random decaying systems") {
        std::mt19937_64 rng(41);
        oracles::RandomSystemOptions opt;
        opt.min_re = 0.3;
        opt.max_modes = 6;
        opt.min_output_dim = 6;
        opt.max_output_dim = 8;
        for (int it = 0; it < 20; ++it) {
            const ValidatedSystem sys = validate_system(oracles::random_system(rng, opt));
            for (double t : {0.1, 1.0}) {
                RenormCheck check;
                try {
                    check = renorm_contraction_check(sys, t);
                } catch (const PreconditionError& e) {
                    // Near-singular G(inf) is legitimate for random draws.
                    CHECK(e.code() == ErrorCode::NotExactlyObservable);
                    continue;
                }
                CHECK(check.ok);
            }
        }
    }
    SUBCASE("duplicated modes make G(inf) singular") {
        SpectralSystem sys;
        sys.modes.resize(2);
        sys.modes[0].lambda = {1.0, 0.0};
        sys.modes[1].lambda = {1.0, 0.0};
        sys.modes[0].obs = Eigen::VectorXcd::Ones(1);
        sys.modes[1].obs = Eigen::VectorXcd::Ones(1);
        sys.observation = VectorObservation{1};
        try {
            renorm_contraction_check(validate_system(sys), 1.0);
            FAIL("expected NotExactlyObservable");
        } catch (const PreconditionError& e) {
            CHECK(e.code() == ErrorCode::NotExactlyObservable);
        }
    }
}
