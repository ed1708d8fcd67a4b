#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcb/qkd.hpp"

using namespace qcb;

TEST_CASE("excess_map: zero noise, eta = 0.5 identity, exact round-trip") {
    const ExcessMap z = excess_map(0.3, 0.0);
    CHECK(z.nbar == 0.0);
    CHECK(z.omega == 0.5);

    CHECK(excess_map(0.5, 0.29).nbar == doctest::Approx(0.29).epsilon(1e-15));

    for (double eta : {0.1, 0.5, 0.93})
        for (double eps : {0.0, 0.2, 0.9}) {
            const ExcessMap m = excess_map(eta, eps);
            const double back = (1.0 - eta) * m.nbar / eta;
            CHECK(back == doctest::Approx(eps).epsilon(1e-12));
        }
    CHECK_THROWS_AS(excess_map(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(excess_map(1.0, 0.1), std::invalid_argument);
}

TEST_CASE("rate_trusted: xi = 0 is half the reverse coherent information") {
    for (int i = 0; i < 100; ++i) {
        const double eta = 0.02 + 0.0097 * i;
        const double eps = 0.003 * i;
        const double w = excess_map(eta, eps).omega;
        CHECK(rate_trusted(eta, eps, 0.0) ==
              doctest::Approx(0.5 * rev_coherent_info(eta, w)).epsilon(1e-9));
        // the coherent variant doubles the rate, recovering R_LB at xi = 0
        CHECK(rate_trusted_coherent(eta, eps, 0.0) ==
              doctest::Approx(rev_coherent_info(eta, w)).epsilon(1e-9));
    }
    CHECK(rate_trusted_coherent(0.5, 0.1, 0.7) == 2.0 * rate_trusted(0.5, 0.1, 0.7));
}

TEST_CASE("rate_trusted: value against independently recomposed mutual informations") {
    // high-modulation pieces recombined by hand: R = (I_AB - chi_BE)/2 with
    //   I_AB -> (1/2) log2[eta mu / ((1-eta) w + xi)]  (mu -> inf)
    //   chi_BE = (1/2) log2[(1-eta) eta mu / (w + xi (1-eta))] + s(w) - s(nu)
    const double eta = 0.5, eps = 0.0, xib = 1.0;
    const double w = excess_map(eta, eps).omega;
    const double xl = xib * (1.0 - eta);
    const double nu = std::sqrt(w * (1.0 + 4.0 * w * xl) / (4.0 * (w + xl)));
    const double mu = 1e9;  // stands in for the high-modulation limit
    const double iab = 0.5 * std::log2(eta * mu / ((1.0 - eta) * w + xib));
    const double chi = 0.5 * std::log2((1.0 - eta) * eta * mu / (w + xl)) + s_entropy(w) - s_entropy(nu);
    CHECK(rate_trusted(eta, eps, xib) == doctest::Approx(0.5 * (iab - chi)).epsilon(1e-8));
}

TEST_CASE("rate_noswitching: frozen eta = 0.5 zero-noise value and threshold existence") {
    CHECK(rate_noswitching(0.5, 0.0) == doctest::Approx(0.557304959111037).epsilon(1e-12));
    for (double eta : {0.35, 0.6, 0.9, 0.99}) {
        CHECK(rate_noswitching(eta, 0.0) > 0.0);
        const ThresholdResult t =
            threshold_solve([eta](double e) { return rate_noswitching(eta, e); });
        CHECK_FALSE(t.clamped_low);
        CHECK_FALSE(t.clamped_high);
        CHECK(t.excess > 0.0);
        CHECK(t.excess < 1.0);
    }
}

TEST_CASE("rate_twoway: eta -> 0 limit is -s(omega); positive at moderate loss") {
    // hold omega fixed while eta -> 0 (the log term vanishes, nu2 -> 1/2)
    const double eta = 1e-9;
    for (double w : {0.6, 1.0})
        for (double v0 : {0.5, 1e3}) {
            const double eps = (w - 0.5) * (1.0 - eta) / eta;
            CHECK(excess_map(eta, eps).omega == doctest::Approx(w).epsilon(1e-12));
            CHECK(std::abs(rate_twoway(eta, eps, v0) - (-s_entropy(w))) < 1e-5);
        }
    for (double eta2 : {0.65, 0.8, 0.95}) {
        CHECK(rate_twoway(eta2, 0.0, 0.5) > 0.0);
    }
    CHECK_THROWS_AS(rate_twoway(1.0, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(rate_twoway(0.5, 0.1, 0.3), std::invalid_argument);
}

TEST_CASE("threshold_solve: eps_LB at eta = 0.5 equals the independent h(nbar) = 1 root") {
    const double eta = 0.5;
    const ThresholdResult t = threshold_solve(
        [eta](double e) { return rev_coherent_info(eta, excess_map(eta, e).omega); });
    CHECK(t.residual < 1e-10);

    // independent bisection of h(nbar) = 1 in long double
    long double lo = 0.0L, hi = 1.0L;
    for (int i = 0; i < 200; ++i) {
        const long double m = (lo + hi) / 2;
        const long double h = (m + 1) * std::log2(m + 1) - m * std::log2(m);
        (h < 1.0L ? lo : hi) = m;
    }
    const double root = static_cast<double>((lo + hi) / 2);
    CHECK(t.excess == doctest::Approx(root).epsilon(1e-9));
    CHECK(root == doctest::Approx(0.293815373340).epsilon(1e-9));
}

TEST_CASE("threshold_solve: clamping and residual behavior") {
    // rate negative everywhere: clamps to 0
    const ThresholdResult low = threshold_solve([](double) { return -1.0; });
    CHECK(low.excess == 0.0);
    CHECK(low.clamped_low);
    // rate positive everywhere: clamps to 1 (eps_UB)
    const ThresholdResult high = threshold_solve([](double) { return 1.0; });
    CHECK(high.excess == 1.0);
    CHECK(high.clamped_high);
    // non-monotone double root: smallest root returned with the warning flag
    const ThresholdResult multi =
        threshold_solve([](double e) { return (e - 0.2) * (e - 0.6) * 10.0; });
    CHECK(multi.multiple_roots);
    CHECK(multi.excess == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("threshold_trusted_inf: beats eps_LB, below 1, monotone in xi") {
    for (double db : {1.0, 5.0, 15.0, 30.0}) {
        const double eta = db_to_eta(db);
        const TrustedInfResult inf = threshold_trusted_inf(eta);
        const double lb = threshold_solve([eta](double e) {
                              return rev_coherent_info(eta, excess_map(eta, e).omega);
                          }).excess;
        CHECK(inf.monotone);
        CHECK(inf.excess > lb);
        CHECK(inf.excess < 1.0);
        CHECK(inf.converged);
    }
}

TEST_CASE("lasota_expansion: regime accuracy and limits") {
    const LasotaResult a = lasota_expansion(1e-3, 0.0);
    CHECK(a.expansion == doctest::Approx(1e-3 * std::log2(M_E)).epsilon(1e-12));
    CHECK(a.exact == doctest::Approx(a.expansion).epsilon(1e-3));

    // leading truncation error is (log2 e / 2)(eta^2 - nbar^2); at
    // (0.01, 0.001) that is 2.33% of the rate
    const LasotaResult b = lasota_expansion(0.01, 0.001);
    const double rel = std::abs(b.exact - b.expansion) / std::abs(b.exact);
    CHECK(rel == doctest::Approx(0.0233).epsilon(0.02));
    CHECK(std::abs(b.exact - b.expansion) ==
          doctest::Approx(0.5 * std::log2(M_E) * (0.01 * 0.01 - 0.001 * 0.001)).epsilon(0.05));

    // away from the rate-zero curve the expansion stays inside 2%
    for (double eta : {0.002, 0.005, 0.01})
        for (double nbar : {0.0, eta / 100.0}) {
            const LasotaResult l = lasota_expansion(eta, nbar);
            CHECK(std::abs(l.exact - l.expansion) / std::abs(l.exact) < 0.02);
        }

    // nbar log2 nbar -> 0 as nbar -> 0 at fixed small eta
    const LasotaResult c1 = lasota_expansion(0.02, 1e-9);
    const LasotaResult c0 = lasota_expansion(0.02, 0.0);
    CHECK(std::abs(c1.expansion - c0.expansion) < 1e-7);
}

TEST_CASE("sweep_thresholds: ordering, ranges, dB round-trip, full 61-point grid") {
    std::vector<double> grid;
    for (int i = 0; i < 61; ++i) grid.push_back(30.0 * i / 60.0);
    const auto curves = sweep_thresholds(grid);
    REQUIRE(curves.size() == 6);
    CHECK(curves[0].protocol == "eps_ub");
    CHECK(curves[1].protocol == "eps_lb");
    CHECK(curves[2].protocol == "eps_trusted_inf");

    for (const auto& c : curves) {
        REQUIRE(c.points.size() == 61);
        for (std::size_t i = 0; i < c.points.size(); ++i) {
            CHECK(c.points[i].second >= 0.0);
            CHECK(c.points[i].second <= 1.0);
            if (i) CHECK(c.points[i].first > c.points[i - 1].first);
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(curves[0].points[i].second == 1.0);                       // eps_ub identically 1
        const double lb = curves[1].points[i].second;
        const double tr = curves[2].points[i].second;
        CHECK(lb < tr);                                                 // trusted noise helps
        CHECK(tr < 1.0);                                                // but stays below eps_ub
    }
    // dB conversion round-trips away from the clamped 0 dB endpoint
    for (double db : {0.5, 3.0, 17.0, 30.0}) {
        CHECK(eta_to_db(db_to_eta(db)) == doctest::Approx(db).epsilon(1e-12));
    }
}
