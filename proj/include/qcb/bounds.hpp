#ifndef QCB_BOUNDS_HPP
#define QCB_BOUNDS_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "qcb/channels.hpp"
#include "qcb/entropy.hpp"
#include "qcb/errors.hpp"
#include "qcb/telesim.hpp"

// Single-letter two-way capacity bounds and their finite-n strong-converse
// refinements.
//
// Weak-converse values (bits per use):
//   thermal loss:  -log2[(1-eta) eta^nbar] - h(nbar)     for nbar < eta/(1-eta), else 0
//   amplifier:     log2[g^(nbar+1)/(g-1)] - h(nbar)      for nbar < 1/(g-1),   else 0
//   additive:      (xi-1)/ln2 - log2(xi)                 for xi < 1,           else 0
//   pure loss:     -log2(1-eta)          (capacity; all two-way capacities equal)
//   ql amplifier:  -log2(1-1/g)          (capacity)
//   Pauli:         1 - H2(p_max) if p_max >= 1/2 else 0
//   depolarizing:  1 - H2(3p/4) for p <= 2/3 else 0
//   dephasing:     1 - H2(p)              (capacity)
//   erasure:       1 - p                  (capacity)
//   amp. damping:  min{1, -log2 p}
//
// "= 0 otherwise" regions return exactly 0 with a flag rather than the
// negative formula value. Infinite bounds (identity-like parameters) are a
// tagged sentinel, never a floating-point infinity.

namespace qcb {

enum class BoundKind { Weak, Strong, Capacity };

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Weak: return "weak";
        case BoundKind::Strong: return "strong";
        case BoundKind::Capacity: return "capacity";
    }
    return "?";
}

struct BoundResult {
    double value = 0.0;        // bits per channel use; meaningless when infinite
    BoundKind kind = BoundKind::Weak;
    std::string channel;
    std::string formula_id;
    std::map<std::string, double> params;
    bool infinite = false;     // +inf sentinel
    bool zero_clamped = false; // parameters in the stated zero region
    std::string hierarchy;     // capacity results pin Q2 = D2 = K = P2
    std::string residual;      // dropped/unresolved correction terms, if any

    static BoundResult finite(double v, BoundKind k, std::string chan, std::string formula) {
        BoundResult r;
        r.value = v; r.kind = k; r.channel = std::move(chan); r.formula_id = std::move(formula);
        r.hierarchy = (k == BoundKind::Capacity) ? "Q2=D2=K=P2" : "Q2=D2<=K=P2";
        return r;
    }
    static BoundResult infinite_bound(std::string chan, std::string formula) {
        BoundResult r;
        r.infinite = true; r.kind = BoundKind::Weak;
        r.channel = std::move(chan); r.formula_id = std::move(formula);
        r.hierarchy = "Q2=D2<=K=P2";
        return r;
    }
};

/// Entanglement-flux bound of a qubit channel (capacity where distillable).
inline BoundResult flux_dv(const DVChannelSpec& spec) {
    using K = DVChannelSpec::Kind;
    switch (spec.kind) {
        case K::Pauli: {
            const double pmax = std::max(std::max(spec.pauli[0], spec.pauli[1]),
                                         std::max(spec.pauli[2], spec.pauli[3]));
            if (pmax < 0.5) {
                auto r = BoundResult::finite(0.0, BoundKind::Weak, spec.name(), "pauli-flux");
                r.zero_clamped = true;
                return r;
            }
            return BoundResult::finite(1.0 - binary_entropy(pmax), BoundKind::Weak, spec.name(), "pauli-flux");
        }
        case K::Depolarizing: {
            if (spec.p > 2.0 / 3.0) {
                auto r = BoundResult::finite(0.0, BoundKind::Weak, spec.name(), "depolarizing-flux");
                r.zero_clamped = true;
                return r;
            }
            return BoundResult::finite(1.0 - binary_entropy(0.75 * spec.p), BoundKind::Weak, spec.name(),
                                       "depolarizing-flux");
        }
        case K::Dephasing:
            return BoundResult::finite(1.0 - binary_entropy(spec.p), BoundKind::Capacity, spec.name(),
                                       "dephasing-capacity");
        case K::Erasure:
            return BoundResult::finite(1.0 - spec.p, BoundKind::Capacity, spec.name(), "erasure-capacity");
        case K::AmplitudeDamping:
            if (spec.p == 0.0) return BoundResult::finite(1.0, BoundKind::Weak, spec.name(), "damping-flux");
            return BoundResult::finite(std::min(1.0, -std::log2(spec.p)), BoundKind::Weak, spec.name(),
                                       "damping-flux");
    }
    throw std::logic_error("flux_dv: unreachable");
}

/// Weak-converse flux bound (capacity for the distillable quantum-limited
/// forms) of a phase-insensitive Gaussian canonical form.
inline BoundResult bound_cv(const CanonicalForm& form) {
    using K = CanonicalForm::Kind;
    switch (form.kind) {
        case K::PureLoss:
        case K::ThermalLoss: {
            const double eta = form.eta;
            const double nbar = (form.kind == K::PureLoss) ? 0.0 : form.nbar;
            if (eta >= 1.0) return BoundResult::infinite_bound(form.name(), "loss-flux");
            const BoundKind kind = (nbar == 0.0) ? BoundKind::Capacity : BoundKind::Weak;
            const char* id = (nbar == 0.0) ? "pure-loss-capacity" : "thermal-loss-flux";
            if (nbar >= eta / (1.0 - eta)) {  // includes the eta = 0 channel
                auto r = BoundResult::finite(0.0, BoundKind::Weak, form.name(), id);
                r.zero_clamped = true;
                return r;
            }
            const double v = -std::log2(1.0 - eta) - nbar * std::log2(eta) - h_entropy(nbar);
            return BoundResult::finite(std::max(0.0, v), kind, form.name(), id);
        }
        case K::QLimAmplifier:
        case K::Amplifier: {
            const double g = form.g;
            const double nbar = (form.kind == K::QLimAmplifier) ? 0.0 : form.nbar;
            const BoundKind kind = (nbar == 0.0) ? BoundKind::Capacity : BoundKind::Weak;
            const char* id = (nbar == 0.0) ? "qlim-amplifier-capacity" : "amplifier-flux";
            if (nbar >= 1.0 / (g - 1.0)) {
                auto r = BoundResult::finite(0.0, BoundKind::Weak, form.name(), id);
                r.zero_clamped = true;
                return r;
            }
            const double v = (nbar + 1.0) * std::log2(g) - std::log2(g - 1.0) - h_entropy(nbar);
            return BoundResult::finite(std::max(0.0, v), kind, form.name(), id);
        }
        case K::AdditiveNoise: {
            if (form.xi == 0.0) return BoundResult::infinite_bound(form.name(), "additive-noise-flux");
            if (form.xi >= 1.0) {
                auto r = BoundResult::finite(0.0, BoundKind::Weak, form.name(), "additive-noise-flux");
                r.zero_clamped = true;
                return r;
            }
            const double v = (form.xi - 1.0) / std::log(2.0) - std::log2(form.xi);
            return BoundResult::finite(std::max(0.0, v), BoundKind::Weak, form.name(), "additive-noise-flux");
        }
        case K::Identity:
            return BoundResult::infinite_bound(form.name(), "identity");
        case K::B1:
            throw std::invalid_argument("bound_cv: no closed-form bound for the B1 form");
    }
    throw std::logic_error("bound_cv: unreachable");
}

/// Capacity-to-loss ratio at high loss; approaches log2(e) = 1.4427 as eta -> 0.
inline double pure_loss_scaling(double eta) {
    if (!(eta > 0.0 && eta <= 0.01))
        throw std::invalid_argument("pure_loss_scaling: eta must be in (0, 0.01]");
    return bound_cv(CanonicalForm::pure_loss(eta)).value / eta;
}

/// Reverse coherent information rate R = -log2(1-eta) - s(omega); may be
/// negative, callers clamp when solving thresholds.
inline double rev_coherent_info(double eta, double omega) {
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("rev_coherent_info: eta must be in (0,1)");
    if (!(omega >= 0.5))
        throw std::invalid_argument("rev_coherent_info: omega must be >= 1/2");
    return -std::log2(1.0 - eta) - s_entropy(omega);
}

/// Relative-entropy variance of the flux bound:
///   thermal loss: nbar(nbar+1) log2^2[eta (nbar+1)/nbar]
///   amplifier:    nbar(nbar+1) log2^2[(nbar+1)/(g nbar)]
///   additive:     (1-xi)^2 / ln^2 2
/// with the quantum-limited nbar -> 0 limits equal to 0.
inline double relent_variance(const CanonicalForm& form) {
    using K = CanonicalForm::Kind;
    switch (form.kind) {
        case K::PureLoss:
        case K::QLimAmplifier:
            return 0.0;
        case K::ThermalLoss: {
            if (form.nbar == 0.0) return 0.0;
            if (!(form.eta > 0.0)) throw std::invalid_argument("relent_variance: eta must be > 0");
            const double l = std::log2(form.eta * (form.nbar + 1.0) / form.nbar);
            return form.nbar * (form.nbar + 1.0) * l * l;
        }
        case K::Amplifier: {
            if (form.nbar == 0.0) return 0.0;
            const double l = std::log2((form.nbar + 1.0) / (form.g * form.nbar));
            return form.nbar * (form.nbar + 1.0) * l * l;
        }
        case K::AdditiveNoise: {
            const double d = 1.0 - form.xi;
            return d * d / (std::log(2.0) * std::log(2.0));
        }
        default:
            throw std::invalid_argument("relent_variance: no variance formula for this form");
    }
}

/// C(eps) = log2(6) + 2 log2((1+eps)/(1-eps)); strictly increasing on (0,1).
template <typename Scalar = double>
Scalar c_eps(Scalar eps) {
    if (!(eps > Scalar(0) && eps < Scalar(1)))
        throw std::invalid_argument("c_eps: eps must be in (0,1)");
    return std::log2(Scalar(6)) + Scalar(2) * std::log2((Scalar(1) + eps) / (Scalar(1) - eps));
}

namespace detail {
/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
} // namespace detail

/// Inverse standard normal CDF to 1e-9 absolute accuracy: Acklam's rational
/// approximation polished by Newton steps on the erfc-based CDF.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;

    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int it = 0; it < 2; ++it) {
        const double err = detail::normal_cdf(x) - p;
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        if (pdf <= 0.0) break;
        x -= err / pdf;
    }
    return x;
}

struct StrongConverseParams {
    enum class Variant { GaussianQuantile, Chebyshev, Distillable };
    int n_uses = 1;
    double security_eps = 0.01;
    Variant variant = Variant::Chebyshev;

    void validate() const {
        if (n_uses < 1) throw std::invalid_argument("StrongConverseParams: n_uses must be >= 1");
        if (!(security_eps > 0.0 && security_eps < 1.0))
            throw std::invalid_argument("StrongConverseParams: security_eps must be in (0,1)");
    }
};

/// Finite-n strong-converse bound:
///   chebyshev (default):  Phi + sqrt(V / (n (1-eps))) + C(eps)/n
///   gaussian-quantile:    Phi + sqrt(V/n) PhiInv(eps), with the O(log n / n)
///                         term carried as a symbolic residual (its constant is
///                         unresolved), never folded into the value
///   distillable:          Phi + C(eps)/n   (pure loss / ql amplifier only)
inline BoundResult sc_bound(const CanonicalForm& form, const StrongConverseParams& params) {
    using V = StrongConverseParams::Variant;
    using K = CanonicalForm::Kind;
    params.validate();
    if (form.kind == K::B1)
        throw std::invalid_argument("sc_bound: no relative-entropy variance is available for the B1 form");

    const BoundResult phi = bound_cv(form);
    if (phi.infinite) return phi;
    const double n = static_cast<double>(params.n_uses);

    BoundResult r;
    switch (params.variant) {
        case V::Distillable: {
            const bool ql = form.kind == K::PureLoss || form.kind == K::QLimAmplifier ||
                            (form.kind == K::ThermalLoss && form.nbar == 0.0) ||
                            (form.kind == K::Amplifier && form.nbar == 0.0);
            if (!ql)
                throw std::invalid_argument(
                    "sc_bound: distillable variant applies only to pure loss / quantum-limited amplifier");
            r = BoundResult::finite(phi.value + c_eps(params.security_eps) / n, BoundKind::Strong,
                                    form.name(), "strong-converse-distillable");
            break;
        }
        case V::Chebyshev: {
            const double var = relent_variance(form);
            r = BoundResult::finite(
                phi.value + std::sqrt(var / (n * (1.0 - params.security_eps))) + c_eps(params.security_eps) / n,
                BoundKind::Strong, form.name(), "strong-converse-chebyshev");
            r.params["variance"] = var;
            break;
        }
        case V::GaussianQuantile: {
            const double var = relent_variance(form);
            r = BoundResult::finite(phi.value + std::sqrt(var / n) * normal_quantile(params.security_eps),
                                    BoundKind::Strong, form.name(), "strong-converse-quantile");
            r.residual = "O(log2(n)/n)";
            r.params["variance"] = var;
            break;
        }
    }
    r.params["n"] = n;
    r.params["eps"] = params.security_eps;
    r.params["phi"] = phi.value;
    return r;
}

struct CorrectedBound {
    BoundResult bound;
    ErrorBudget budget;
};

/// Strong-converse pipeline with explicit teleportation-simulation error:
/// delta from the energy-constrained surrogate, peeled into eps_composed,
/// then the Chebyshev-style bound with variance 2V and eps -> eps_composed
/// (distillable forms keep the variance-free shape). When eps_composed
/// saturates to 1 the bound is the +inf sentinel: the failure mode of an
/// unbounded-alphabet simulation at too small mu. O(1/mu) corrections are
/// dropped and recorded as a residual.
inline CorrectedBound corrected_pipeline(const CanonicalForm& form, int n_uses, double security_eps,
                                         double mu, double N_constraint) {
    using K = CanonicalForm::Kind;
    const double delta = sim_error_budget(form, mu, N_constraint);
    ErrorBudget budget = peel(n_uses, delta, security_eps);
    budget.mu = mu;
    budget.N_constraint = N_constraint;

    CorrectedBound out;
    out.budget = budget;
    const BoundResult phi = bound_cv(form);
    if (phi.infinite || budget.eps_composed >= 1.0) {
        out.bound = BoundResult::infinite_bound(form.name(), "corrected-strong-converse");
        out.bound.residual = "eps_composed saturated";
        return out;
    }

    const double n = static_cast<double>(n_uses);
    const double eps = budget.eps_composed;
    const bool ql = form.kind == K::PureLoss || form.kind == K::QLimAmplifier ||
                    (form.kind == K::ThermalLoss && form.nbar == 0.0) ||
                    (form.kind == K::Amplifier && form.nbar == 0.0);
    double value = phi.value + c_eps(eps) / n;
    if (!ql) value += std::sqrt(2.0 * relent_variance(form) / (n * (1.0 - eps)));
    out.bound = BoundResult::finite(value, BoundKind::Strong, form.name(), "corrected-strong-converse");
    out.bound.residual = "O(1/mu) dropped";
    out.bound.params["n"] = n;
    out.bound.params["eps"] = security_eps;
    out.bound.params["eps_composed"] = eps;
    out.bound.params["mu"] = mu;
    out.bound.params["N"] = N_constraint;
    return out;
}

enum class ContinuityMeasure { REE, Squashed };

/// Generic finite-n weak-converse composer E + alpha g(eps) + h(eps)/n with
/// the continuity choices g = 4 eps, h = 2 H2(eps) (relative entropy of
/// entanglement) or g = 16 sqrt(eps), h = 2 H2(2 sqrt(eps)) (squashed
/// entanglement).
inline double finite_n_weak_bound(double E_value, double security_eps, int n_uses, double alpha,
                                  ContinuityMeasure measure) {
    if (!(E_value >= 0.0)) throw std::invalid_argument("finite_n_weak_bound: E must be >= 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("finite_n_weak_bound: alpha must be > 0");
    if (n_uses < 1) throw std::invalid_argument("finite_n_weak_bound: n_uses must be >= 1");
    if (!(security_eps >= 0.0)) throw std::invalid_argument("finite_n_weak_bound: eps must be >= 0");
    const double n = static_cast<double>(n_uses);
    if (measure == ContinuityMeasure::REE) {
        if (security_eps > 1.0)
            throw std::invalid_argument("finite_n_weak_bound: H2 argument out of range (eps must be <= 1)");
        return E_value + alpha * 4.0 * security_eps + 2.0 * binary_entropy(security_eps) / n;
    }
    const double root = std::sqrt(security_eps);
    if (2.0 * root > 1.0)
        throw std::invalid_argument("finite_n_weak_bound: H2 argument out of range (need 2 sqrt(eps) <= 1)");
    return E_value + alpha * 16.0 * root + 2.0 * binary_entropy(2.0 * root) / n;
}

} // namespace qcb

#endif // QCB_BOUNDS_HPP
