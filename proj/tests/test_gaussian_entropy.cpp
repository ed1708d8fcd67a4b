#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qcb/fock.hpp"
#include "qcb/gaussian_entropy.hpp"
#include "support.hpp"

using namespace qcb;

namespace {

// independent long-double evaluation of the closed-form fidelity, in its unreduced form as
// written: F = [1 - 4 mt (sqrt(4mu^2-1) + mt - 2mu(1 + 2 mt xi))]^(-1/4)
long double fidelity_literal(long double mu, long double mt) {
    const long double xi = 2 * mu - std::sqrt(4 * mu * mu - 1);
    const long double radicand = 1 - 4 * mt * (std::sqrt(4 * mu * mu - 1) + mt - 2 * mu * (1 + 2 * mt * xi));
    return std::pow(radicand, -0.25L);
}

} // namespace

TEST_CASE("gibbs_matrix: thermal closed form G = 2 acoth(2 nu) I") {
    const Eigen::MatrixXd g = gibbs_matrix(make_thermal(1.0).cov());
    // 2 acoth(3) = ln 2 per quadrature
    CHECK(g(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(g(1, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(g(0, 1)) < 1e-12);

    for (double nbar : {0.2, 0.7, 3.0}) {
        const Eigen::MatrixXd gt = gibbs_matrix(make_thermal(nbar).cov());
        const double expect = 2.0 * std::atanh(1.0 / (2.0 * nbar + 1.0));
        CHECK(gt(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("gibbs_matrix: vanishes entrywise for large thermal noise") {
    const Eigen::MatrixXd g = gibbs_matrix(make_thermal(1e7).cov());
    CHECK(g.lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("gibbs_matrix: pure-state guard band raises singular_state_error") {
    CHECK_THROWS_AS(gibbs_matrix(make_tmsv(0.5 + 1e-12).cov()), singular_state_error);
    CHECK_THROWS_AS(gibbs_matrix(make_thermal(0.0).cov()), singular_state_error);
}

TEST_CASE("gibbs_matrix: real-symmetric output on random states") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> numin(0.6, 2.5);
    for (int t = 0; t < 30; ++t) {
        const CovMatrix cm = qcb_test::random_physical_cm(rng, 1 + t % 3, numin(rng));
        const Eigen::MatrixXd g = gibbs_matrix(cm);  // residues asserted internally
        CHECK((g - g.transpose()).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("sigma_term: Sigma(V,V) equals the symplectic-spectrum entropy") {
    const CovMatrix th1 = make_thermal(1.0).cov();
    CHECK(sigma_term(th1, th1) == doctest::Approx(2.0).epsilon(1e-12));  // h(1) = 2 bits

    std::mt19937 rng(777);
    std::uniform_real_distribution<double> numin(0.6, 3.0);
    for (int t = 0; t < 60; ++t) {
        const CovMatrix cm = qcb_test::random_physical_cm(rng, 1 + t % 3, numin(rng));
        CHECK(sigma_term(cm, cm) == doctest::Approx(von_neumann_entropy(cm)).epsilon(1e-8));
    }
}

TEST_CASE("sigma_term: frozen thermal cross value and the delta term") {
    const CovMatrix v1 = make_thermal(1.0).cov();
    const CovMatrix v2 = make_thermal(2.0).cov();
    // S(rho1) + S(rho1 || rho2) = 2 + 0.169925001442312
    CHECK(sigma_term(v1, v2) == doctest::Approx(2.169925001442312).epsilon(1e-12));

    Eigen::VectorXd delta(2);
    delta << 1.0, 0.0;
    const double with_delta = sigma_term(v1, v2, delta);
    CHECK(with_delta >= sigma_term(v1, v2));  // quadratic form of a PSD Gibbs matrix
    // full-state overload carries the mean offset
    const GaussianState s1(delta, v1);
    const GaussianState s2(Eigen::VectorXd::Zero(2), v2);
    CHECK(sigma_term(s1, s2) == doctest::Approx(with_delta).epsilon(1e-14));
    CHECK(sigma_term(s2, s2) == doctest::Approx(sigma_term(v2, v2)).epsilon(1e-14));

    CHECK_THROWS_AS(sigma_term(v1, make_tmsv(2.0).cov()), std::invalid_argument);  // dim mismatch
    CHECK_THROWS_AS(sigma_term(make_tmsv(2.0).cov(), make_tmsv(2.0).cov()), singular_state_error);
}

TEST_CASE("relative_entropy: zero on identical states, Fock-oracle thermal pairs") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> numin(0.6, 2.0);
    for (int t = 0; t < 20; ++t) {
        const GaussianState rho = qcb_test::random_physical_state(rng, 1 + t % 2, numin(rng), 0.5);
        CHECK(relative_entropy(rho, rho) == doctest::Approx(0.0).epsilon(1e-10));
    }

    CHECK(relative_entropy(make_thermal(1.0), make_thermal(2.0)) ==
          doctest::Approx(0.169925001442312).epsilon(1e-9));
    CHECK(relative_entropy(make_thermal(2.0), make_thermal(1.0)) ==
          doctest::Approx(0.245112497836531).epsilon(1e-9));

    // the module's raison d'etre: Gibbs route vs truncated Fock sums
    for (double n1 : {0.3, 1.2, 4.0})
        for (double n2 : {0.5, 2.2, 5.0}) {
            const int cutoff = pair_cutoff(n1, n2);
            const double oracle = diag_relative_entropy(thermal_pmf(n1, cutoff), thermal_pmf(n2, cutoff)).value;
            CHECK(relative_entropy(make_thermal(n1), make_thermal(n2)) ==
                  doctest::Approx(oracle).epsilon(1e-6));
        }
}

TEST_CASE("relative_entropy: nonnegative with mean offsets; equal iff equal") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> numin(0.6, 2.0);
    for (int t = 0; t < 30; ++t) {
        const GaussianState a = qcb_test::random_physical_state(rng, 1, numin(rng), 1.0);
        const GaussianState b = qcb_test::random_physical_state(rng, 1, numin(rng), 1.0);
        const double s = relative_entropy(a, b);
        CHECK(s >= 0.0);
        const bool same_moments = (a.cov().mat() - b.cov().mat()).lpNorm<Eigen::Infinity>() < 1e-8 &&
                                  (a.mean() - b.mean()).lpNorm<Eigen::Infinity>() < 1e-8;
        if (s < 1e-10) CHECK(same_moments);
    }
    // displaced copy of the same CM has strictly positive relative entropy
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd shifted(2);
    shifted << 0.7, -0.2;
    const GaussianState base(mean, make_thermal(1.0).cov());
    const GaussianState moved(shifted, make_thermal(1.0).cov());
    CHECK(relative_entropy(base, moved) > 1e-3);
}

TEST_CASE("relative_entropy: displaced-thermal closed form") {
    // S(th(n1) displaced by d || th(n2)) = KL(n1, n2) + |d|^2/2 log2((n2+1)/n2)
    const auto kl = [](double n1, double n2) {
        return n1 * std::log2(n1 / n2) - (n1 + 1.0) * std::log2((n1 + 1.0) / (n2 + 1.0));
    };
    for (double n1 : {0.4, 1.0, 2.5})
        for (double n2 : {0.7, 1.8}) {
            Eigen::VectorXd d(2);
            d << 0.9, -0.4;
            const GaussianState moved(d, make_thermal(n1).cov());
            const double expect = kl(n1, n2) + 0.5 * d.squaredNorm() * std::log2((n2 + 1.0) / n2);
            CHECK(relative_entropy(moved, make_thermal(n2)) == doctest::Approx(expect).epsilon(1e-11));
        }
}

TEST_CASE("relative_entropy: additive over tensor products of thermals") {
    const auto two_mode = [](double na, double nb) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(4, 4);
        v.topLeftCorner(2, 2) = (na + 0.5) * Eigen::Matrix2d::Identity();
        v.bottomRightCorner(2, 2) = (nb + 0.5) * Eigen::Matrix2d::Identity();
        return GaussianState(CovMatrix(std::move(v)));
    };
    for (double a : {0.3, 1.1})
        for (double b : {0.6, 2.0}) {
            const double joint = relative_entropy(two_mode(a, b), two_mode(0.9, 1.4));
            const double split = relative_entropy(make_thermal(a), make_thermal(0.9)) +
                                 relative_entropy(make_thermal(b), make_thermal(1.4));
            CHECK(joint == doctest::Approx(split).epsilon(1e-10));
        }
}

TEST_CASE("von_neumann_entropy: vacuum 0, thermal h(nbar), TMSV pure") {
    CHECK(von_neumann_entropy(make_thermal(0.0).cov()) == 0.0);
    CHECK(von_neumann_entropy(make_thermal(1.0).cov()) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(von_neumann_entropy(make_tmsv(2.0).cov()) == doctest::Approx(0.0).epsilon(1e-8));
    // TMSV reduced state: entanglement entropy h(mu - 1/2)
    for (double mu : {1.0, 2.5}) {
        const CovMatrix reduced(make_tmsv(mu).cov().mat().topLeftCorner(2, 2).eval());
        CHECK(von_neumann_entropy(reduced) == doctest::Approx(h_entropy(mu - 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("teleport_fidelity: frozen value, literal-formula oracle, CM-level reduction") {
    // mu = 1, mu_in = 1/2: the input TMSV is vacuum x vacuum, so F reduces to
    // the single-mode vacuum-through-additive-noise fidelity 1/sqrt(1 + xi).
    const double xi1 = 2.0 - std::sqrt(3.0);
    const double f = teleport_fidelity(1.0, 0.5);
    CHECK(f == doctest::Approx(0.888073833977115).epsilon(1e-12));
    CHECK(f == doctest::Approx(1.0 / std::sqrt(1.0 + xi1)).epsilon(1e-13));
    CHECK(f == doctest::Approx(static_cast<double>(fidelity_literal(1.0L, 0.5L))).epsilon(1e-13));

    // literal-formula oracle: the unreduced expression loses ~(mu*mt)^2 ulps
    // to cancellation, so the comparison grid stays where long double holds it
    // to 1e-10 (mu*mt <= 1e3) with a relaxed corner at mu*mt ~ 1e4
    for (double mu : {0.51, 0.75, 1.0, 5.0, 100.0})
        for (double mt : {0.5, 1.0, 10.0}) {
            CHECK(teleport_fidelity(mu, mt) ==
                  doctest::Approx(static_cast<double>(fidelity_literal(mu, mt))).epsilon(1e-10));
        }
    CHECK(teleport_fidelity(1e4, 1.0) ==
          doctest::Approx(static_cast<double>(fidelity_literal(1e4, 1.0))).epsilon(1e-8));
    CHECK(teleport_fidelity(20.0, 500.0) ==
          doctest::Approx(static_cast<double>(fidelity_literal(20.0, 500.0))).epsilon(1e-8));

    CHECK_THROWS_AS(teleport_fidelity(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(teleport_fidelity(1.0, 0.4), std::invalid_argument);
}

TEST_CASE("teleport_fidelity: limits in mu and mu_in") {
    // fixed mt, mu -> inf: F -> 1 with O(1/mu) error
    CHECK(1.0 - teleport_fidelity(1e8, 2.0) < 1e-7);
    double prev = 0.0;
    for (double mu : {1.0, 10.0, 100.0, 1e4, 1e8}) {
        const double f = teleport_fidelity(mu, 2.0);
        CHECK(f > prev);
        prev = f;
    }
    // fixed mu, mt -> inf: F -> 0
    CHECK(teleport_fidelity(2.0, 1e12) < 1e-5);
    // strictly decreasing in mu_in at fixed mu (endpoint rule)
    for (double mu : {0.6, 1.0, 8.0}) {
        double last = 2.0;
        for (double mt : {0.5, 1.0, 4.0, 20.0, 1e3, 1e6}) {
            const double f = teleport_fidelity(mu, mt);
            CHECK(f < last);
            last = f;
        }
    }
    // (1 - F) * mu bounded above at fixed mt (the O(1/mu) convergence claim)
    double worst = 0.0;
    for (double mu = 10.0; mu <= 1e4; mu *= 2.0)
        worst = std::max(worst, (1.0 - teleport_fidelity(mu, 3.0)) * mu);
    CHECK(worst < 2.0);
}

TEST_CASE("teleport_infidelity: matches 1 - F at moderate scale, stays exact past it") {
    for (double mu : {0.51, 1.0, 7.0, 1e3, 1e6})
        for (double mt : {0.5, 2.0, 100.0}) {
            CHECK(teleport_infidelity(mu, mt) ==
                  doctest::Approx(1.0 - teleport_fidelity(mu, mt)).epsilon(1e-9).scale(1e-10));
        }
    // beyond mu ~ 1e15 the subtraction underflows but the stable form tracks
    // the mt * xi ~ mt/(4 mu) asymptote
    CHECK(1.0 - teleport_fidelity(1e20, 5.5) == 0.0);
    CHECK(teleport_infidelity(1e20, 5.5) == doctest::Approx(5.5 / 4e20).epsilon(1e-6));
    CHECK(teleport_infidelity(1e24, 5.5) > 0.0);
    CHECK(teleport_infidelity(1e24, 5.5) < teleport_infidelity(1e20, 5.5));
}
