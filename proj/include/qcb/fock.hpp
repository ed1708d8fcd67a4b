#ifndef QCB_FOCK_HPP
#define QCB_FOCK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qcb/errors.hpp"

// Truncated Fock-basis oracle for photon-number-diagonal Gaussian states.
// This module is deliberately independent of the covariance-matrix code: it
// certifies the Gibbs-matrix relative entropy on thermal pairs from first
// principles (geometric photon statistics).

namespace qcb {

struct FockDistribution {
    std::vector<double> probs;  // probs[k] for k = 0..cutoff
    int cutoff = 0;
    double tail_mass = 0.0;     // exact mass beyond the cutoff
};

inline constexpr double kFockTailTol = 1e-8;
inline constexpr int kFockDefaultCutoff = 400;
inline constexpr int kFockMaxCutoff = 4096;

/// Thermal photon-number distribution p(k) = nbar^k / (nbar+1)^(k+1); the tail
/// beyond the cutoff is the closed form (nbar/(nbar+1))^(cutoff+1) and must be
/// below 1e-8.
inline FockDistribution thermal_pmf(double nbar, int cutoff) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("thermal_pmf: nbar must be >= 0");
    if (cutoff < 1) throw std::invalid_argument("thermal_pmf: cutoff must be >= 1");
    const double ratio = nbar / (nbar + 1.0);
    const double tail = std::pow(ratio, static_cast<double>(cutoff) + 1.0);
    if (tail > kFockTailTol)
        throw cutoff_too_small_error("thermal_pmf: tail mass " + std::to_string(tail) +
                                     " exceeds 1e-8 at cutoff " + std::to_string(cutoff));
    FockDistribution d;
    d.cutoff = cutoff;
    d.tail_mass = tail;
    d.probs.resize(static_cast<std::size_t>(cutoff) + 1);
    double p = 1.0 / (nbar + 1.0);
    for (int k = 0; k <= cutoff; ++k) {
        d.probs[static_cast<std::size_t>(k)] = p;
        p *= ratio;
    }
    return d;
}

/// Smallest cutoff from the escalation policy (start 400, double, cap 4096)
/// whose thermal tail is below 1e-8.
inline int auto_cutoff(double nbar) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("auto_cutoff: nbar must be >= 0");
    const double ratio = nbar / (nbar + 1.0);
    for (int c = kFockDefaultCutoff; c <= kFockMaxCutoff; c *= 2) {
        if (std::pow(ratio, static_cast<double>(c) + 1.0) <= kFockTailTol) return c;
    }
    throw cutoff_too_small_error("auto_cutoff: tail mass still above 1e-8 at the 4096 cap");
}

/// Largest cutoff whose smallest retained thermal probability is still a
/// normal double; beyond it the entries underflow to exact zeros.
inline int representable_cutoff(double nbar) {
    if (!(nbar > 0.0)) return kFockMaxCutoff;
    const double lr = std::log(nbar / (nbar + 1.0));
    const double l0 = -std::log(nbar + 1.0);
    const double k = (std::log(2.5e-308) - l0) / lr;
    return std::max(1, static_cast<int>(std::floor(k)) - 2);
}

/// Shared cutoff for comparing two thermal distributions: meets both tail
/// requirements while keeping both supports free of underflow.
inline int pair_cutoff(double nbar1, double nbar2) {
    const int need = std::max(auto_cutoff(nbar1), auto_cutoff(nbar2));
    const int cap = std::min(representable_cutoff(nbar1), representable_cutoff(nbar2));
    return std::min(need, cap);
}

/// Squared Schmidt coefficients of a TMSV with parameter mu: the reduced state
/// is thermal with nbar = mu - 1/2.
inline FockDistribution tmsv_schmidt(double mu, int cutoff) {
    if (!(mu >= 0.5)) throw std::invalid_argument("tmsv_schmidt: mu must be >= 1/2");
    return thermal_pmf(mu - 0.5, cutoff);
}

struct DiagRelEntropy {
    double value = 0.0;       // sum_k p(k) log2(p(k)/q(k)) over k <= cutoff
    double tail_bound = 0.0;  // bound on the dropped-tail contribution
};

/// Classical relative entropy (bits) between two truncated photon-number
/// distributions; q must dominate the support of p.
inline DiagRelEntropy diag_relative_entropy(const FockDistribution& p, const FockDistribution& q) {
    if (p.cutoff != q.cutoff)
        throw std::invalid_argument("diag_relative_entropy: cutoffs must match");
    DiagRelEntropy out;
    const double ln2 = std::log(2.0);
    double last_ratio = 0.0, prev_ratio = 0.0;
    for (int k = 0; k <= p.cutoff; ++k) {
        const double pk = p.probs[static_cast<std::size_t>(k)];
        const double qk = q.probs[static_cast<std::size_t>(k)];
        if (pk > 0.0) {
            if (!(qk > 0.0))
                throw std::domain_error("diag_relative_entropy: q must be positive on the support of p");
            const double r = std::log(pk / qk) / ln2;
            out.value += pk * r;
            prev_ratio = last_ratio;
            last_ratio = r;
        }
    }
    // For geometric inputs the log-ratio is linear in k, so the dropped tail is
    // bounded by tail * |extrapolated ratio| plus the geometric first moment.
    const double slope = last_ratio - prev_ratio;
    double geo = 0.0;
    if (p.cutoff >= 1 && p.probs[static_cast<std::size_t>(p.cutoff) - 1] > 0.0) {
        const double r = p.probs[static_cast<std::size_t>(p.cutoff)] /
                         p.probs[static_cast<std::size_t>(p.cutoff) - 1];
        if (r > 0.0 && r < 1.0) geo = r / (1.0 - r);
    }
    out.tail_bound = p.tail_mass * (std::abs(last_ratio + slope) + std::abs(slope) * (1.0 + geo));
    return out;
}

/// Mean photon number of a truncated distribution plus the geometric tail
/// correction (exact for thermal inputs).
inline double fock_mean(const FockDistribution& d) {
    double m = 0.0;
    for (int k = 1; k <= d.cutoff; ++k) m += k * d.probs[static_cast<std::size_t>(k)];
    // exact tail first moment for a geometric distribution p(k) = (1-r) r^k
    if (d.cutoff >= 1 && d.probs[0] > 0.0) {
        const double r = d.probs[1] / d.probs[0];
        if (r > 0.0 && r < 1.0) {
            const double m0 = static_cast<double>(d.cutoff) + 1.0;
            m += std::pow(r, m0) * (m0 - (m0 - 1.0) * r) / (1.0 - r);
        }
    }
    return m;
}

/// Shannon entropy (bits) of the truncated distribution.
inline double fock_entropy(const FockDistribution& d) {
    double s = 0.0;
    const double ln2 = std::log(2.0);
    for (int k = 0; k <= d.cutoff; ++k) {
        const double pk = d.probs[static_cast<std::size_t>(k)];
        if (pk > 0.0) s -= pk * std::log(pk) / ln2;
    }
    return s;
}

} // namespace qcb

#endif // QCB_FOCK_HPP
