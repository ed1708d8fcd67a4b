#ifndef QCB_QKD_HPP
#define QCB_QKD_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qcb/bounds.hpp"
#include "qcb/entropy.hpp"

// Security thresholds of point-to-point CV-QKD protocols over the thermal-loss
// channel: the largest excess noise eps with nonnegative asymptotic rate, as a
// function of the loss. Excess noise refers the thermal noise to the channel
// input, omega = 1/2 + eta*eps/(1-eta). All rates are ideal-reconciliation,
// asymptotic, high-modulation formulas.

namespace qcb {

inline constexpr double kThresholdTol = 1e-10;  // contract on |R| and interval at the returned root
inline constexpr double kEtaClampHigh = 1.0 - 1e-12;  // 0 dB evaluated at the open-boundary limit
inline constexpr double kEtaClampLow = 1e-15;

struct ExcessMap {
    double nbar = 0.0;
    double omega = 0.5;
};

/// nbar = eta*eps/(1-eta), omega = nbar + 1/2; exact inverse of
/// eps = (1-eta) nbar / eta.
inline ExcessMap excess_map(double eta, double excess_noise) {
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("excess_map: eta must be in (0,1)");
    if (!(excess_noise >= 0.0))
        throw std::invalid_argument("excess_map: excess noise must be >= 0");
    ExcessMap m;
    m.nbar = eta * excess_noise / (1.0 - eta);
    m.omega = m.nbar + 0.5;
    return m;
}

/// One-way squeezed-state protocol with trusted additive noise xi_bob at the
/// receiver (homodyne, reverse reconciliation, basis-reconciliation factor 1/2
/// included):
///   R = (1/4) log2[(w + xi(1-eta)) / ((1-eta)((1-eta)w + xi))] + (s(nu) - s(w))/2,
///   nu = sqrt( w (1 + 4 w xi (1-eta)) / (4 (w + xi (1-eta))) ).
/// At xi_bob = 0 this is exactly half the reverse coherent information rate.
inline double rate_trusted(double eta, double excess_noise, double xi_bob) {
    if (!(xi_bob >= 0.0))
        throw std::invalid_argument("rate_trusted: xi_bob must be >= 0");
    const double w = excess_map(eta, excess_noise).omega;
    const double xl = xi_bob * (1.0 - eta);
    const double nu = std::sqrt(w * (1.0 + 4.0 * w * xl) / (4.0 * (w + xl)));
    return 0.25 * std::log2((w + xl) / ((1.0 - eta) * ((1.0 - eta) * w + xi_bob))) +
           0.5 * (s_entropy(nu) - s_entropy(w));
}

/// Coherent implementation of the trusted-noise protocol (quantum memories and
/// joint basis choice, so no basis-reconciliation factor): exactly twice
/// rate_trusted, never applied silently.
inline double rate_trusted_coherent(double eta, double excess_noise, double xi_bob) {
    return 2.0 * rate_trusted(eta, excess_noise, xi_bob);
}

/// One-way no-switching protocol (coherent states + heterodyne), ideal reverse
/// reconciliation:
///   R = log2[(2/e) eta / ((1-eta)(eta + 2w(1-eta) + 1))]
///       + s[(1 + 2w(1-eta)) / (2 eta)] - s(w).
inline double rate_noswitching(double eta, double excess_noise) {
    const double w = excess_map(eta, excess_noise).omega;
    const double arg = (1.0 + 2.0 * w * (1.0 - eta)) / (2.0 * eta);
    return std::log2(2.0 / M_E * eta / ((1.0 - eta) * (eta + 2.0 * w * (1.0 - eta) + 1.0))) +
           s_entropy(arg) - s_entropy(w);
}

/// Two-way protocol with Gaussian-modulated thermal states of variance v0 and
/// homodyne detection, ideal reverse reconciliation:
///   R = (1/2) log2[(eta^2 v0 + w + eta^3 (w - v0)) / ((1-eta)((1-eta^2) w + eta v0))]
///       + s(nu2) - s(w),
///   nu2 = sqrt( w (1 + 4 eta^2 v0 w + eta^3 (1 - 4 w v0)) / (4 (eta^2 v0 + w + eta^3 (w - v0))) ).
/// v0 = 1/2 is the coherent-state setting; v0 = 1e3 stands in for the
/// largely-thermal regime.
inline double rate_twoway(double eta, double excess_noise, double v0) {
    if (!(v0 >= 0.5)) throw std::invalid_argument("rate_twoway: v0 must be >= 1/2");
    if (!(eta < 1.0)) throw std::invalid_argument("rate_twoway: eta = 1 is a pole");
    const double w = excess_map(eta, excess_noise).omega;
    const double num = eta * eta * v0 + w + eta * eta * eta * (w - v0);
    const double den = (1.0 - eta) * ((1.0 - eta * eta) * w + eta * v0);
    const double nu2 = std::sqrt(
        w * (1.0 + 4.0 * eta * eta * v0 * w + eta * eta * eta * (1.0 - 4.0 * w * v0)) / (4.0 * num));
    return 0.5 * std::log2(num / den) + s_entropy(nu2) - s_entropy(w);
}

struct ThresholdResult {
    double excess = 0.0;
    int iterations = 0;
    double residual = 0.0;        // |R| at the returned point
    bool clamped_low = false;     // rate <= 0 already at eps = 0
    bool clamped_high = false;    // rate > 0 still at eps = 1
    bool multiple_roots = false;  // non-monotone rate; smallest root returned
};

/// Root of rate(eps) = 0 on [lo, hi] by bisection to |R| < 1e-10 or interval
/// width < 1e-10. Returns lo/hi clamps when the rate does not change sign, and
/// the smallest root (with a warning flag) when several sign changes exist.
inline ThresholdResult threshold_solve(const std::function<double(double)>& rate, double lo = 0.0,
                                       double hi = 1.0) {
    ThresholdResult out;
    const double r_lo = rate(lo);
    if (!(r_lo > 0.0)) {
        out.excess = lo;
        out.residual = std::abs(r_lo);
        out.clamped_low = true;
        return out;
    }

    // locate the first sign change on a coarse scan (guards non-monotone rates)
    constexpr int kScan = 64;
    double a = lo, fa = r_lo, b = hi;
    bool found = false;
    int changes = 0;
    double prev_x = lo, prev_f = r_lo;
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / kScan;
        const double f = rate(x);
        if ((prev_f > 0.0) != (f > 0.0)) {
            ++changes;
            if (!found && prev_f > 0.0) {
                a = prev_x; fa = prev_f; b = x;
                found = true;
            }
        }
        prev_x = x;
        prev_f = f;
    }
    out.multiple_roots = changes > 1;
    if (!found) {
        out.excess = hi;
        out.residual = std::abs(rate(hi));
        out.clamped_high = true;
        return out;
    }

    double fm = fa;
    double m = a;
    for (int it = 0; it < 80; ++it) {
        m = 0.5 * (a + b);
        fm = rate(m);
        ++out.iterations;
        if (fm == 0.0 || (b - a) < kThresholdTol / 100.0) break;  // beats the contract on both criteria
        if (fm > 0.0) a = m; else b = m;
    }
    out.excess = m;
    out.residual = std::abs(fm);
    return out;
}

struct TrustedInfResult {
    double excess = 0.0;
    double residual = 0.0;  // last Richardson increment
    bool converged = false;
    bool monotone = true;
};

/// Threshold of the trusted-noise protocol in the large-xi limit: thresholds at
/// xi in {1e2, 1e3, 1e4} extrapolated by one Richardson step in 1/xi.
inline TrustedInfResult threshold_trusted_inf(double eta) {
    const double xis[3] = {1e2, 1e3, 1e4};
    double t[3];
    for (int i = 0; i < 3; ++i) {
        const double xi = xis[i];
        t[i] = threshold_solve([eta, xi](double e) { return rate_trusted(eta, e, xi); }).excess;
    }
    TrustedInfResult out;
    out.monotone = t[0] <= t[1] + 1e-12 && t[1] <= t[2] + 1e-12;
    const double d1 = t[1] - t[0], d2 = t[2] - t[1];
    out.excess = t[2] + d2 / 9.0;  // t(xi) ~ t_inf - a/xi with ratio-10 grid
    out.residual = std::abs(d2);
    out.converged = std::abs(d2) < std::abs(d1) && std::abs(d2) < 1e-3;
    if (!out.converged) out.excess = t[2];
    return out;
}

struct LasotaResult {
    double exact = 0.0;
    double expansion = 0.0;
};

/// Low-loss low-noise expansion of the reverse coherent information rate,
/// R ~= (eta - nbar) log2 e + nbar log2 nbar, alongside the exact value.
/// Intended regime: eta <= 0.05, nbar <= 0.05.
inline LasotaResult lasota_expansion(double eta, double nbar) {
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("lasota_expansion: eta must be in (0,1)");
    if (!(nbar >= 0.0))
        throw std::invalid_argument("lasota_expansion: nbar must be >= 0");
    LasotaResult r;
    r.exact = rev_coherent_info(eta, nbar + 0.5);
    r.expansion = (eta - nbar) * std::log2(M_E) + (nbar > 0.0 ? nbar * std::log2(nbar) : 0.0);
    return r;
}

struct ThresholdCurve {
    std::string protocol;
    std::vector<std::pair<double, double>> points;  // (loss_db, excess_noise), sorted by loss
    int max_iterations = 0;
    double max_residual = 0.0;
    int flagged_points = 0;  // clamped or multi-root solver outcomes
};

inline double db_to_eta(double loss_db) {
    const double eta = std::pow(10.0, -loss_db / 10.0);
    return std::min(std::max(eta, kEtaClampLow), kEtaClampHigh);
}

inline double eta_to_db(double eta) { return -10.0 * std::log10(eta); }

/// Threshold curves of the six reference protocols over a dB loss grid:
/// eps_ub (flux bound, identically 1), eps_lb (reverse coherent information),
/// eps_trusted_inf, no-switching, and the two-way protocol in the coherent
/// (v0 = 1/2) and largely-thermal (v0 = 1e3) settings.
inline std::vector<ThresholdCurve> sweep_thresholds(const std::vector<double>& db_grid) {
    if (db_grid.empty())
        throw std::invalid_argument("sweep_thresholds: grid must be nonempty");

    struct Proto {
        const char* name;
        std::function<ThresholdResult(double)> solve;
    };
    const std::vector<Proto> protos = {
        {"eps_ub", [](double) { ThresholdResult r; r.excess = 1.0; return r; }},
        {"eps_lb",
         [](double eta) {
             return threshold_solve([eta](double e) {
                 return rev_coherent_info(eta, excess_map(eta, e).omega);
             });
         }},
        {"eps_trusted_inf",
         [](double eta) {
             const TrustedInfResult t = threshold_trusted_inf(eta);
             ThresholdResult r;
             r.excess = t.excess;
             r.residual = t.residual;
             return r;
         }},
        {"eps_noswitching",
         [](double eta) { return threshold_solve([eta](double e) { return rate_noswitching(eta, e); }); }},
        {"eps_twoway_coherent",
         [](double eta) { return threshold_solve([eta](double e) { return rate_twoway(eta, e, 0.5); }); }},
        {"eps_twoway_thermal",
         [](double eta) { return threshold_solve([eta](double e) { return rate_twoway(eta, e, 1e3); }); }},
    };

    std::vector<ThresholdCurve> curves;
    curves.reserve(protos.size());
    for (const auto& proto : protos) {
        ThresholdCurve c;
        c.protocol = proto.name;
        for (const double db : db_grid) {
            const ThresholdResult r = proto.solve(db_to_eta(db));
            c.points.emplace_back(db, r.excess);
            c.max_iterations = std::max(c.max_iterations, r.iterations);
            c.max_residual = std::max(c.max_residual, r.residual);
            if (r.clamped_high || r.multiple_roots) ++c.flagged_points;
        }
        curves.push_back(std::move(c));
    }
    return curves;
}

} // namespace qcb

#endif // QCB_QKD_HPP
