#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qcb/bounds.hpp"
#include "qcb/channels.hpp"
#include "qcb/emit.hpp"
#include "qcb/fock.hpp"
#include "qcb/gaussian_entropy.hpp"
#include "qcb/qkd.hpp"
#include "qcb/symplectic.hpp"
#include "qcb/telesim.hpp"

namespace qcb::selftest {
namespace {

using qcb::format_sig12;

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

CheckResult make(const std::string& name, bool ok, const std::string& detail = "") {
    return CheckResult{name, ok, detail, false};
}

CheckResult info(const std::string& name, const std::string& detail) {
    return CheckResult{name, true, detail, true};
}

CovMatrix random_cm(std::mt19937& rng, int nmodes, double nu_min) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = 2 * nmodes;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    Eigen::MatrixXd v0 = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
    Eigen::EigenSolver<Eigen::MatrixXd> es(omega<double>(nmodes) * v0, false);
    double lo = 1e300;
    for (int i = 0; i < es.eigenvalues().size(); ++i) lo = std::min(lo, std::abs(es.eigenvalues()[i]));
    return CovMatrix((nu_min / lo) * v0);
}

// independent long-double evaluation of the binary entropy
long double h2_literal(long double p) {
    if (p <= 0.0L || p >= 1.0L) return 0.0L;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// independent long-double root of h(nbar) = target
double h_inverse_literal(double target) {
    long double lo = 0.0L, hi = 1.0e16L;
    for (int i = 0; i < 400; ++i) {
        const long double m = (lo > 0 ? std::sqrt(lo * hi) : (lo + hi) / 2);
        const long double h = (m + 1) * std::log2(m + 1) - m * std::log2(m);
        (h < target ? lo : hi) = m;
    }
    return static_cast<double>((lo + hi) / 2);
}

std::vector<CheckResult> suite_symplectic() {
    std::vector<CheckResult> out;
    bool omega_ok = true;
    for (int n = 1; n <= 8; ++n) {
        const Eigen::MatrixXd w = omega<double>(n);
        omega_ok = omega_ok &&
                   (w * w + Eigen::MatrixXd::Identity(2 * n, 2 * n)).lpNorm<Eigen::Infinity>() == 0.0 &&
                   (w + w.transpose()).lpNorm<Eigen::Infinity>() == 0.0;
    }
    out.push_back(make("symplectic: Omega^2 = -I, Omega^T = -Omega for n <= 8", omega_ok));

    std::mt19937 rng(101);
    bool phys_ok = true, nu_ok = true, det_ok = true;
    for (int t = 0; t < 40; ++t) {
        const int n = 1 + t % 3;
        const CovMatrix cm = random_cm(rng, n, 0.5 + 0.02 * (t % 50));
        phys_ok = phys_ok && is_physical(cm);
        const auto nus = symplectic_eigenvalues(cm);
        for (double nu : nus) nu_ok = nu_ok && nu >= 0.5 - 1e-9;
        if (n == 1) det_ok = det_ok && close_abs(nus[0], std::sqrt(cm.mat().determinant()), 1e-10);
    }
    phys_ok = phys_ok && is_physical(make_tmsv(7.0).cov()) && is_physical(make_thermal(2.0).cov());
    out.push_back(make("symplectic: generated states physical, spectra >= 1/2", phys_ok && nu_ok));
    out.push_back(make("symplectic: single-mode nu = sqrt(det V)", det_ok));

    bool shift_ok = true;
    for (double x = 0.5; x < 40.0; x += 0.382)
        shift_ok = shift_ok && close_abs(s_entropy(x), h_entropy(x - 0.5), 1e-11);
    out.push_back(make("entropy: s(x) = h(x - 1/2) over grid", shift_ok));

    bool photon_ok = true;
    for (double mu : {0.5, 1.0, 3.7, 12.0})
        photon_ok = photon_ok && mean_photon_number(make_tmsv(mu)) == 2.0 * (mu - 0.5);
    out.push_back(make("symplectic: TMSV mean photons = 2(mu - 1/2)", photon_ok));
    return out;
}

std::vector<CheckResult> suite_gaussian_entropy() {
    std::vector<CheckResult> out;
    std::mt19937 rng(202);
    bool sigma_ok = true, gibbs_ok = true;
    for (int t = 0; t < 40; ++t) {
        const CovMatrix cm = random_cm(rng, 1 + t % 3, 0.6 + 0.03 * (t % 30));
        sigma_ok = sigma_ok && close_abs(sigma_term(cm, cm), von_neumann_entropy(cm), 1e-8);
        const Eigen::MatrixXd g = gibbs_matrix(cm);
        gibbs_ok = gibbs_ok && (g - g.transpose()).lpNorm<Eigen::Infinity>() < 1e-9;
    }
    out.push_back(make("gaussian_entropy: Sigma(V,V) = spectrum entropy, 120 random states", sigma_ok));
    out.push_back(make("gaussian_entropy: Gibbs matrices real-symmetric", gibbs_ok));

    bool re_ok = true;
    for (int t = 0; t < 20; ++t) {
        std::uniform_real_distribution<double> numin(0.6, 2.0);
        const GaussianState a(random_cm(rng, 1 + t % 2, numin(rng)));
        re_ok = re_ok && relative_entropy(a, a) <= 1e-10;
    }
    re_ok = re_ok && close_abs(relative_entropy(make_thermal(1.0), make_thermal(2.0)), 0.169925001442312, 1e-9);
    out.push_back(make("gaussian_entropy: S(rho||rho) = 0 and frozen thermal pair", re_ok));

    bool mono_ok = true;
    for (double mu : {0.6, 1.0, 8.0}) {
        double last = 2.0;
        for (double mt : {0.5, 1.0, 4.0, 20.0, 1e3, 1e6}) {
            const double f = teleport_fidelity(mu, mt);
            mono_ok = mono_ok && f < last;
            last = f;
        }
    }
    out.push_back(make("gaussian_entropy: fidelity strictly decreasing in input energy", mono_ok));

    double worst = 0.0;
    for (double mu = 10.0; mu <= 1e4; mu *= 2.0)
        worst = std::max(worst, (1.0 - teleport_fidelity(mu, 3.0)) * mu);
    out.push_back(make("gaussian_entropy: (1 - F) * mu bounded over mu in [10, 1e4]", worst < 2.0,
                       "sup = " + format_sig12(worst)));

    const double f6 = teleport_fidelity(2.0, 1e6), f8 = teleport_fidelity(2.0, 1e8);
    const double expo = (std::log(f8) - std::log(f6)) / (std::log(1e8) - std::log(1e6));
    out.push_back(info("gaussian_entropy: fitted large-input-energy fidelity exponent",
                       "d ln F / d ln mt = " + format_sig12(expo) + " (reported, not asserted; F -> 0 holds)"));
    return out;
}

std::vector<CheckResult> suite_fock() {
    std::vector<CheckResult> out;
    bool mean_ok = true;
    for (double nbar : {0.1, 1.0, 2.5, 5.0}) {
        const FockDistribution d = thermal_pmf(nbar, auto_cutoff(nbar));
        mean_ok = mean_ok && close_abs(fock_mean(d), nbar, 1e-9);
    }
    out.push_back(make("fock: thermal mean matches nbar after tail correction", mean_ok));

    bool kl_ok = true;
    double worst = 0.0;
    for (double n1 : {0.3, 1.0, 2.0, 4.5})
        for (double n2 : {0.2, 1.5, 5.0}) {
            const int cutoff = pair_cutoff(n1, n2);
            const double oracle = diag_relative_entropy(thermal_pmf(n1, cutoff), thermal_pmf(n2, cutoff)).value;
            const double gibbs = relative_entropy(make_thermal(n1), make_thermal(n2));
            worst = std::max(worst, std::abs(oracle - gibbs));
            kl_ok = kl_ok && close_abs(oracle, gibbs, 1e-6);
        }
    out.push_back(make("fock: diagonal relative entropy certifies the Gibbs route", kl_ok,
                       "max |Fock - Gibbs| = " + format_sig12(worst)));

    bool schmidt_ok = true;
    for (double mu : {0.7, 1.5, 3.0, 6.0}) {
        const FockDistribution d = tmsv_schmidt(mu, auto_cutoff(mu - 0.5));
        schmidt_ok = schmidt_ok && close_abs(fock_entropy(d), h_entropy(mu - 0.5), 1e-6);
    }
    out.push_back(make("fock: TMSV reduced entropy equals h(mu - 1/2)", schmidt_ok));
    return out;
}

std::vector<CheckResult> suite_channels() {
    std::vector<CheckResult> out;
    bool cp_ok = true;
    for (double eta : {0.0, 0.3, 0.7, 1.0})
        for (double nbar : {0.0, 0.5, 2.0}) {
            const GaussianChannelSpec s = to_spec(CanonicalForm::thermal_loss(eta, nbar));
            const double gap = s.T.determinant() - 1.0;
            cp_ok = cp_ok && s.N.determinant() >= gap * gap / 4.0 - 1e-10;
        }
    for (double g : {1.2, 3.0})
        cp_ok = cp_ok && to_spec(CanonicalForm::qlim_amplifier(g)).bona_fide();
    cp_ok = cp_ok && to_spec(CanonicalForm::b1()).bona_fide();
    out.push_back(make("channels: canonical forms satisfy det N >= (det T - 1)^2/4", cp_ok));

    std::mt19937 rng(303);
    bool phys_ok = true;
    const std::vector<CanonicalForm> forms = {
        CanonicalForm::thermal_loss(0.35, 1.2), CanonicalForm::pure_loss(0.6),
        CanonicalForm::amplifier(1.8, 0.4),     CanonicalForm::additive_noise(0.7),
        CanonicalForm::b1()};
    for (int t = 0; t < 15; ++t) {
        const int n = 1 + t % 2;
        const GaussianState st(random_cm(rng, n, 0.55));
        for (const auto& f : forms) phys_ok = phys_ok && is_physical(apply(to_spec(f), st, t % n).cov());
    }
    for (double mu : {0.5, 1.0, 1000.0})
        phys_ok = phys_ok && is_physical(quasi_choi(CanonicalForm::thermal_loss(0.2, 2.0), mu).cov());
    out.push_back(make("channels: apply and quasi_choi preserve physicality", phys_ok));

    std::uniform_real_distribution<double> numin(0.55, 1.5);
    bool comp_ok = true;
    for (double e1 : {0.3, 0.8})
        for (double e2 : {0.5, 0.9}) {
            const GaussianState st(random_cm(rng, 1, numin(rng)));
            const GaussianState a =
                apply(to_spec(CanonicalForm::thermal_loss(e1, 0.0)),
                      apply(to_spec(CanonicalForm::thermal_loss(e2, 0.0)), st, 0), 0);
            const GaussianState b = apply(to_spec(CanonicalForm::thermal_loss(e1 * e2, 0.0)), st, 0);
            comp_ok = comp_ok && (a.cov().mat() - b.cov().mat()).lpNorm<Eigen::Infinity>() < 1e-12;
        }
    out.push_back(make("channels: loss composes multiplicatively at nbar = 0", comp_ok));

    bool dv_ok = true;
    for (double p : {0.1, 0.4, 2.0 / 3.0, 0.9}) {
        const DVChannelSpec d = DVChannelSpec::depolarizing(p);
        dv_ok = dv_ok && close_abs(flux_dv(d).value, flux_dv(d.as_pauli()).value, 1e-12);
    }
    out.push_back(make("channels: depolarizing flux agrees with its Pauli representation", dv_ok));
    return out;
}

std::vector<CheckResult> suite_telesim() {
    std::vector<CheckResult> out;
    bool xi_ok = true;
    double prev = 1.0 + 1e-15;
    for (double mu : {0.5, 1.0, 10.0, 1e4, 1e10}) {
        const double xi = bk_noise(mu);
        xi_ok = xi_ok && xi > 0.0 && xi <= 1.0 && xi < prev;
        prev = xi;
    }
    xi_ok = xi_ok && close_abs(bk_noise(1e8) * 4e8, 1.0, 1e-9);
    out.push_back(make("telesim: xi in (0,1], strictly decreasing, 4*mu*xi -> 1", xi_ok));

    bool sim_ok = true;
    for (const auto& f : {CanonicalForm::thermal_loss(0.3, 0.8), CanonicalForm::amplifier(2.0, 0.2)}) {
        const GaussianChannelSpec sim = simulate_compose(f, 1e6);
        sim_ok = sim_ok && (sim.N - to_spec(f).N).lpNorm<Eigen::Infinity>() < 1e-6;
    }
    out.push_back(make("telesim: simulation converges entrywise to the channel spec", sim_ok));

    double worst = 0.0;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9})
        worst = std::max(worst, verify_finite_resource(pure_loss_resource(eta), std::sqrt(eta),
                                                       to_spec(CanonicalForm::pure_loss(eta))));
    for (double eta : {0.4, 0.8})
        for (double frac : {0.3, 0.9}) {
            const CanonicalForm f = CanonicalForm::thermal_loss(eta, frac * eta / (1.0 - eta));
            worst = std::max(worst,
                             verify_finite_resource(finite_resource_state(f), std::sqrt(eta), to_spec(f)));
        }
    for (double mu : {0.6, 5.0})
        worst = std::max(worst, verify_finite_resource(make_tmsv(mu), 1.0,
                                                       to_spec(CanonicalForm::additive_noise(bk_noise(mu)))));
    out.push_back(make("telesim: finite-resource simulations exact on the CM level", worst < 1e-10,
                       "max deviation = " + format_sig12(worst)));

    bool budget_ok = true;
    double prev_mu = 3.0;
    for (double mu : {1.0, 10.0, 100.0, 1e3}) {
        const double d = sim_error_budget(CanonicalForm::pure_loss(0.5), mu, 10.0);
        budget_ok = budget_ok && d < prev_mu;
        prev_mu = d;
    }
    double prev_n = 0.0;
    for (double N : {0.0, 1.0, 10.0, 1e3}) {
        const double d = sim_error_budget(CanonicalForm::pure_loss(0.5), 10.0, N);
        budget_ok = budget_ok && d >= prev_n && d <= 2.0;
        prev_n = d;
    }
    out.push_back(make("telesim: delta_hat monotone (down in mu, up in N, capped at 2)", budget_ok));

    bool peel_ok = true;
    for (int n : {1, 10, 1000})
        for (double d : {0.0, 1e-5, 0.1}) {
            const ErrorBudget b = peel(n, d, 0.02);
            const double root = std::sqrt(0.02) + std::sqrt(b.eps_tp);
            peel_ok = peel_ok && b.eps_tp <= 0.5 * n * d + 1e-12 &&
                      close_abs(b.eps_composed, std::min(1.0, root * root), 1e-14);
        }
    out.push_back(make("telesim: peel keeps the budget invariants exactly", peel_ok));
    return out;
}

std::vector<CheckResult> suite_bounds() {
    std::vector<CheckResult> out;
    bool zero_ok = true;
    for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        zero_ok = zero_ok && bound_cv(CanonicalForm::thermal_loss(eta, eta / (1.0 - eta))).value == 0.0;
        const double below = bound_cv(CanonicalForm::thermal_loss(eta, (eta / (1.0 - eta)) * (1 - 1e-7))).value;
        zero_ok = zero_ok && below >= 0.0 && below < 1e-5;
    }
    out.push_back(make("bounds: thermal-loss bound continuous and exactly 0 at the boundary", zero_ok));

    bool red_ok = true;
    for (double eta : {0.2, 0.5, 0.8})
        red_ok = red_ok && bound_cv(CanonicalForm::thermal_loss(eta, 0.0)).value ==
                               bound_cv(CanonicalForm::pure_loss(eta)).value;
    for (double g : {1.5, 3.0})
        red_ok = red_ok && bound_cv(CanonicalForm::amplifier(g, 0.0)).value ==
                               bound_cv(CanonicalForm::qlim_amplifier(g)).value;
    out.push_back(make("bounds: nbar = 0 forms reduce to the distillable capacities", red_ok));

    bool match_ok = true;
    for (double eta : {0.25, 0.5, 0.75})
        match_ok = match_ok && close_abs(bound_cv(CanonicalForm::pure_loss(eta)).value,
                                         rev_coherent_info(eta, 0.5), 1e-13);
    for (double p : {0.05, 0.2})
        match_ok = match_ok && close_abs(flux_dv(DVChannelSpec::dephasing(p)).value,
                                         1.0 - static_cast<double>(h2_literal(p)), 1e-12);
    out.push_back(make("bounds: distillable upper bounds meet their lower-bound formulas", match_ok));

    StrongConverseParams p;
    p.security_eps = 0.03;
    bool sc_ok = true;
    const CanonicalForm tl = CanonicalForm::thermal_loss(0.8, 0.1);
    double prev = 1e300;
    for (int n : {1, 10, 1000, 100000000}) {
        p.n_uses = n;
        const double v = sc_bound(tl, p).value;
        sc_ok = sc_ok && v < prev;
        prev = v;
    }
    sc_ok = sc_ok && close_abs(prev, bound_cv(tl).value, 1e-3);
    out.push_back(make("bounds: sc_bound strictly decreasing in n toward Phi", sc_ok));

    bool hier_ok = true;
    hier_ok = hier_ok && bound_cv(CanonicalForm::pure_loss(0.3)).hierarchy == "Q2=D2=K=P2";
    hier_ok = hier_ok && flux_dv(DVChannelSpec::erasure(0.3)).hierarchy == "Q2=D2=K=P2";
    hier_ok = hier_ok && bound_cv(CanonicalForm::thermal_loss(0.3, 0.1)).hierarchy == "Q2=D2<=K=P2";
    out.push_back(make("bounds: capacity results carry Q2 = D2 = K = P2", hier_ok));

    bool corr_ok = true;
    double prev_c = 1e300;
    bool was_inf = false;
    for (double mu : {1e3, 1e6, 1e9, 1e12}) {
        const CorrectedBound c = corrected_pipeline(CanonicalForm::pure_loss(0.5), 50, 0.01, mu, 4.0);
        if (c.bound.infinite) { was_inf = true; continue; }
        if (was_inf) was_inf = false;  // finite after infinite is an improvement
        corr_ok = corr_ok && c.bound.value < prev_c;
        prev_c = c.bound.value;
    }
    out.push_back(make("bounds: corrected pipeline monotone improving in mu", corr_ok));
    return out;
}

std::vector<CheckResult> suite_qkd() {
    std::vector<CheckResult> out;
    bool red_ok = true;
    for (int i = 0; i < 50; ++i) {
        const double eta = 0.05 + 0.018 * i, eps = 0.015 * i;
        red_ok = red_ok && close_abs(rate_trusted(eta, eps, 0.0),
                                     0.5 * rev_coherent_info(eta, excess_map(eta, eps).omega), 1e-9);
    }
    out.push_back(make("qkd: rate_trusted at xi = 0 is half the reverse coherent information", red_ok));

    bool ord_ok = true;
    double worst_res = 0.0;
    for (double db : {0.5, 5.0, 12.0, 25.0}) {
        const double eta = db_to_eta(db);
        const ThresholdResult lb = threshold_solve(
            [eta](double e) { return rev_coherent_info(eta, excess_map(eta, e).omega); });
        const TrustedInfResult ti = threshold_trusted_inf(eta);
        ord_ok = ord_ok && lb.excess < ti.excess && ti.excess < 1.0;
        worst_res = std::max(worst_res, lb.residual);
    }
    out.push_back(make("qkd: eps_LB < eps_inf < eps_UB = 1 on the spot grid", ord_ok));
    out.push_back(make("qkd: threshold residual |R| < 1e-10 at returned roots", worst_res < 1e-10,
                       "max residual = " + format_sig12(worst_res)));

    bool las_ok = true;
    for (double eta : {0.002, 0.005, 0.01})
        for (double nbar : {0.0, eta / 100.0}) {
            const LasotaResult l = lasota_expansion(eta, nbar);
            las_ok = las_ok && std::abs(l.exact - l.expansion) / std::abs(l.exact) < 0.02;
        }
    out.push_back(make("qkd: low-loss expansion within 2% (leading error (log2 e/2) eta^2)", las_ok));
    return out;
}

std::vector<CheckResult> criterion_1() {
    std::vector<CheckResult> out;
    const auto timed = [](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        const double v = fn();
        const auto t1 = std::chrono::steady_clock::now();
        return std::pair<double, double>(v, std::chrono::duration<double>(t1 - t0).count());
    };
    const auto [pl, tpl] = timed([] { return bound_cv(CanonicalForm::pure_loss(0.5)).value; });
    out.push_back(make("1a pure loss eta=0.5 capacity = 1 (1e-12)", close_abs(pl, 1.0, 1e-12) && tpl < 1e-3,
                       "value = " + format_sig12(pl) + ", " + format_sig12(tpl * 1e6) + " us"));
    const auto [qa, tqa] = timed([] { return bound_cv(CanonicalForm::qlim_amplifier(2.0)).value; });
    out.push_back(make("1b ql amplifier g=2 capacity = 1 (1e-12)", close_abs(qa, 1.0, 1e-12) && tqa < 1e-3,
                       "value = " + format_sig12(qa)));
    const auto [er, ter] = timed([] { return flux_dv(DVChannelSpec::erasure(0.25)).value; });
    out.push_back(make("1c erasure p=0.25 capacity = 0.75 exactly", er == 0.75 && ter < 1e-3,
                       "value = " + format_sig12(er)));
    const auto [dp, tdp] = timed([] { return flux_dv(DVChannelSpec::dephasing(0.1)).value; });
    const double indep = 1.0 - static_cast<double>(h2_literal(0.1L));
    out.push_back(make("1d dephasing p=0.1 = 1 - H2(0.1) vs independent H2 (1e-12)",
                       close_abs(dp, indep, 1e-12) && tdp < 1e-3,
                       "value = " + format_sig12(dp) + ", oracle = " + format_sig12(indep)));
    return out;
}

std::vector<CheckResult> criterion_2() {
    const double ratio = pure_loss_scaling(1e-3);
    const double target = std::log2(M_E);
    const bool ok = std::abs(ratio / target - 1.0) < 1e-3;
    return {make("2 rate-loss scaling: bound/eta within 0.1% of log2(e) at eta=1e-3", ok,
                 "ratio = " + format_sig12(ratio) + ", log2(e) = " + format_sig12(target))};
}

std::vector<CheckResult> criterion_3() {
    std::vector<CheckResult> out;
    bool tl_ok = true;
    for (double eta : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double v = bound_cv(CanonicalForm::thermal_loss(eta, eta / (1.0 - eta))).value;
        tl_ok = tl_ok && close_abs(v, 0.0, 1e-9);
    }
    out.push_back(make("3a thermal-loss bound = 0 at nbar = eta/(1-eta), eta in {0.1..0.9}", tl_ok));
    const double add = bound_cv(CanonicalForm::additive_noise(1.0)).value;
    out.push_back(make("3b additive-noise bound = 0 at xi = 1", add == 0.0, "value = " + format_sig12(add)));
    const double dep = flux_dv(DVChannelSpec::depolarizing(2.0 / 3.0)).value;
    out.push_back(make("3c depolarizing flux = 0 at p = 2/3", close_abs(dep, 0.0, 1e-12),
                       "value = " + format_sig12(dep)));
    return out;
}

std::vector<CheckResult> criterion_4() {
    std::vector<CheckResult> out;
    const auto t0 = std::chrono::steady_clock::now();

    bool fock_ok = true;
    double worst = 0.0;
    for (double n1 = 0.1; n1 <= 5.0 + 1e-9; n1 += 0.7)
        for (double n2 = 0.1; n2 <= 5.0 + 1e-9; n2 += 0.7) {
            const int cutoff = pair_cutoff(n1, n2);
            const double oracle =
                diag_relative_entropy(thermal_pmf(n1, cutoff), thermal_pmf(n2, cutoff)).value;
            const double gibbs = relative_entropy(make_thermal(n1), make_thermal(n2));
            worst = std::max(worst, std::abs(oracle - gibbs));
            fock_ok = fock_ok && close_abs(oracle, gibbs, 1e-6);
        }
    out.push_back(make("4a relative entropy matches the Fock-sum oracle on [0.1,5]^2 (1e-6)", fock_ok,
                       "max deviation = " + format_sig12(worst)));

    std::mt19937 rng(404);
    std::uniform_real_distribution<double> numin(0.55, 3.0);
    bool sigma_ok = true;
    double worst_s = 0.0;
    for (int t = 0; t < 200; ++t) {
        const CovMatrix cm = random_cm(rng, 1 + t % 3, numin(rng));
        const double dev = std::abs(sigma_term(cm, cm) - von_neumann_entropy(cm));
        worst_s = std::max(worst_s, dev);
        sigma_ok = sigma_ok && dev <= 1e-8;
    }
    out.push_back(make("4b Sigma(V,V) = symplectic-spectrum entropy on 200 random states (1e-8)", sigma_ok,
                       "max deviation = " + format_sig12(worst_s)));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(make("4c runtime < 30 s", secs < 30.0, format_sig12(secs) + " s"));
    return out;
}

std::vector<CheckResult> criterion_5() {
    std::vector<CheckResult> out;
    double worst_pl = 0.0;
    for (double eta : {0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 0.95})
        worst_pl = std::max(worst_pl, verify_finite_resource(pure_loss_resource(eta), std::sqrt(eta),
                                                             to_spec(CanonicalForm::pure_loss(eta))));
    out.push_back(make("5a pure-loss resource deviation < 1e-10 over the eta grid", worst_pl < 1e-10,
                       "max deviation = " + format_sig12(worst_pl)));

    double worst_fr = 0.0;
    for (double eta : {0.3, 0.5, 0.8})
        for (double frac : {0.1, 0.5, 0.9}) {  // nbar kept below the r >= 0 boundary eta/(1-eta)
            const CanonicalForm f = CanonicalForm::thermal_loss(eta, frac * eta / (1.0 - eta));
            worst_fr = std::max(
                worst_fr, verify_finite_resource(finite_resource_state(f), std::sqrt(eta), to_spec(f)));
        }
    for (double g : {1.5, 2.5})
        for (double frac : {0.3, 0.8}) {  // nbar below 1/(g-1)
            const CanonicalForm f = CanonicalForm::amplifier(g, frac / (g - 1.0));
            worst_fr = std::max(
                worst_fr, verify_finite_resource(finite_resource_state(f), std::sqrt(g), to_spec(f)));
        }
    out.push_back(make("5b finite-resource deviation < 1e-10 over the (eta, nu) grid", worst_fr < 1e-10,
                       "max deviation = " + format_sig12(worst_fr)));

    double worst_tm = 0.0;
    for (double mu : {0.6, 1.0, 5.0, 50.0})
        worst_tm = std::max(worst_tm, verify_finite_resource(make_tmsv(mu), 1.0,
                                                             to_spec(CanonicalForm::additive_noise(bk_noise(mu)))));
    out.push_back(make("5c TMSV resource reproduces additive noise xi(mu) < 1e-12", worst_tm < 1e-12,
                       "max deviation = " + format_sig12(worst_tm)));

    bool sing_ok = true;
    for (double eta : {0.3, 0.6, 0.9}) {
        try {
            finite_resource_state(CanonicalForm::thermal_loss(eta, 0.0));  // nu = (1-eta)/2 exactly
            sing_ok = false;
        } catch (const quantum_limited_singularity&) {
        }
        try {
            finite_resource_state(CanonicalForm::thermal_loss(eta, 0.02));
        } catch (...) {
            sing_ok = false;
        }
    }
    out.push_back(make("5d singularity raised exactly at nu = (1-eta)/2", sing_ok));
    return out;
}

std::vector<CheckResult> criterion_6() {
    std::vector<CheckResult> out;
    const double row = 1.0 - teleport_fidelity(1e3, 0.5);
    out.push_back(make("6a row limit: infidelity < 1e-3 at mu = 1e3, mu_in = 1/2", row < 1e-3,
                       "value = " + format_sig12(row)));

    bool col_ok = true;
    double worst_col = 1.0;
    for (double mu : {0.51, 1.0, 10.0, 100.0}) {
        const double inf = 1.0 - teleport_fidelity(mu, 1e4 * mu);
        worst_col = std::min(worst_col, inf);
        col_ok = col_ok && inf > 0.9;
    }
    out.push_back(make("6b column limit: infidelity > 0.9 at mu_in = 1e4 mu", col_ok,
                       "min = " + format_sig12(worst_col)));

    bool dec_ok = true;
    double prev = 3.0;
    for (double mu : {1.0, 10.0, 100.0, 1e3, 1e4}) {
        const double d = sim_error_budget(CanonicalForm::pure_loss(0.5), mu, 10.0);
        dec_ok = dec_ok && d < prev;
        prev = d;
    }
    const double at1e4 = sim_error_budget(CanonicalForm::pure_loss(0.5), 1e4, 10.0);
    out.push_back(make("6c delta_hat(mu, N=10) strictly decreasing and < 1e-2 by mu = 1e4",
                       dec_ok && at1e4 < 1e-2,
                       "delta_hat(1e4, 10) = " + format_sig12(at1e4) +
                           " (decreasing: " + (dec_ok ? "yes" : "no") +
                           "; 2 sqrt(1 - F^2) at the N = 10 endpoint first drops below 1e-2 near mu ~ 1.1e5)"));
    return out;
}

std::vector<CheckResult> criterion_7() {
    std::vector<CheckResult> out;
    const CanonicalForm pl = CanonicalForm::pure_loss(0.5);
    const double target = 1.0 + c_eps(0.01) / 100.0;

    bool mono_ok = true;
    double prev = 1e300, last = 0.0;
    for (double mu : {1e5, 1e8, 1e12, 1e16, 1e20, 1e24}) {
        const CorrectedBound c = corrected_pipeline(pl, 100, 0.01, mu, 10.0);
        if (c.bound.infinite) { mono_ok = false; break; }
        mono_ok = mono_ok && c.bound.value < prev;
        prev = c.bound.value;
        last = c.bound.value;
    }
    const bool conv_ok = close_abs(last, target, 1e-5);
    out.push_back(make("7a corrected bound converges monotonically to 1 + C(0.01)/100 (1e-5)",
                       mono_ok && conv_ok,
                       "limit = " + format_sig12(last) + ", target = " + format_sig12(target)));

    const CorrectedBound small_mu = corrected_pipeline(pl, 100, 0.01, 1.0, 10.0);
    const CorrectedBound large_n = corrected_pipeline(pl, 1000000, 0.01, 1e4, 10.0);
    out.push_back(make("7b small-mu / large-n inputs yield the +inf sentinel",
                       small_mu.bound.infinite && large_n.bound.infinite,
                       "eps_composed = " + format_sig12(small_mu.budget.eps_composed) + ", " +
                           format_sig12(large_n.budget.eps_composed)));
    return out;
}

std::vector<CheckResult> criterion_8() {
    std::vector<CheckResult> out;
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<double> grid;
    for (int i = 0; i < 61; ++i) grid.push_back(30.0 * i / 60.0);
    const auto curves = sweep_thresholds(grid);

    bool ub_ok = true;
    for (const auto& pt : curves[0].points) ub_ok = ub_ok && pt.second == 1.0;
    out.push_back(make("8a eps_UB identically 1", ub_ok));

    const double eta = 0.5;
    const double lb05 = threshold_solve([eta](double e) {
                            return rev_coherent_info(eta, excess_map(eta, e).omega);
                        }).excess;
    const double oracle_root = h_inverse_literal(1.0);
    out.push_back(make("8b eps_LB(0.5) = 0.2898 (1e-3)", close_abs(lb05, 0.2898, 1e-3),
                       "computed = " + format_sig12(lb05) +
                           ", independent h(nbar)=1 bisection = " + format_sig12(oracle_root)));
    out.push_back(make("8b' eps_LB(0.5) equals the independent h(nbar)=1 root (1e-9)",
                       close_abs(lb05, oracle_root, 1e-9),
                       "|computed - oracle| = " + format_sig12(std::abs(lb05 - oracle_root))));

    bool ord_ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lb = curves[1].points[i].second;
        const double tr = curves[2].points[i].second;
        ord_ok = ord_ok && lb < tr && tr < 1.0;
    }
    out.push_back(make("8c eps_LB < eps_inf < 1 on the 0-30 dB 61-point grid", ord_ok));

    bool half_ok = true;
    for (int i = 0; i < 100; ++i) {
        const double e2 = 0.02 + 0.0095 * i, eps = 0.009 * i;
        half_ok = half_ok && close_abs(rate_trusted(e2, eps, 0.0),
                                       0.5 * rev_coherent_info(e2, excess_map(e2, eps).omega), 1e-9);
    }
    out.push_back(make("8d rate_trusted(.,.,0) = R_LB/2 on a 100-point grid (1e-9)", half_ok));

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(make("8e full sweep < 60 s", secs < 60.0, format_sig12(secs) + " s"));
    return out;
}

std::vector<CheckResult> criterion_9() {
    std::vector<CheckResult> out;
    const bool exact = finite_n_weak_bound(1.375, 0.0, 64, 1.0, ContinuityMeasure::REE) == 1.375;
    out.push_back(make("9a REE composer returns E exactly at eps = 0", exact));

    bool mono_eps = true;
    double prev = -1.0;
    for (double e : {0.0, 1e-4, 1e-3, 0.01, 0.1, 0.3}) {
        const double v = finite_n_weak_bound(1.0, e, 100, 1.0, ContinuityMeasure::REE);
        mono_eps = mono_eps && v >= prev;
        prev = v;
    }
    bool mono_n = true;
    prev = 1e300;
    for (int n : {1, 2, 10, 100, 10000}) {
        const double v = finite_n_weak_bound(1.0, 0.01, n, 1.0, ContinuityMeasure::REE);
        mono_n = mono_n && v < prev;
        prev = v;
    }
    out.push_back(make("9b composer monotone increasing in eps and decreasing in n", mono_eps && mono_n));
    return out;
}

} // namespace

std::vector<CheckResult> run_module_suites() {
    std::vector<CheckResult> out;
    for (auto* suite : {suite_symplectic, suite_gaussian_entropy, suite_fock, suite_channels,
                        suite_telesim, suite_bounds, suite_qkd}) {
        auto r = suite();
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

std::vector<CheckResult> run_criterion(int k) {
    switch (k) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        default: throw std::invalid_argument("run_criterion: k must be in 1..9");
    }
}

std::vector<CheckResult> run_all() {
    std::vector<CheckResult> out = run_module_suites();
    for (int k = 1; k <= 9; ++k) {
        auto r = run_criterion(k);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

int count_failures(const std::vector<CheckResult>& results) {
    int n = 0;
    for (const auto& r : results)
        if (!r.passed && !r.informational) ++n;
    return n;
}

} // namespace qcb::selftest
