#ifndef QCB_CHANNELS_HPP
#define QCB_CHANNELS_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcb/errors.hpp"
#include "qcb/symplectic.hpp"

// Single-mode Gaussian channel models and qubit channel parameter sets.
//
// A Gaussian channel acts as x -> T x + d, V -> T V T^T + N. In the vacuum-
// variance-1/2 convention its complete positivity condition is
// det N >= (det T - 1)^2 / 4 with N symmetric PSD; the quantum-limited
// canonical forms saturate it.

namespace qcb {

inline constexpr double kBonaFideTol = 1e-10;
inline constexpr double kNoisePsdTol = 1e-12;

/// (T, N, d) triple of a single-mode Gaussian channel.
struct GaussianChannelSpec {
    Eigen::Matrix2d T = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d N = Eigen::Matrix2d::Zero();
    Eigen::Vector2d d = Eigen::Vector2d::Zero();

    GaussianChannelSpec() = default;
    GaussianChannelSpec(Eigen::Matrix2d t, Eigen::Matrix2d n, Eigen::Vector2d disp)
        : T(std::move(t)), N(std::move(n)), d(std::move(disp)) {
        if ((N - N.transpose()).lpNorm<Eigen::Infinity>() > 1e-12)
            throw std::invalid_argument("GaussianChannelSpec: N must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(N, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kNoisePsdTol)
            throw std::invalid_argument("GaussianChannelSpec: N must be positive semidefinite");
        if (!bona_fide())
            throw std::invalid_argument("GaussianChannelSpec: (T, N) violates det N >= (det T - 1)^2 / 4");
    }

    bool bona_fide() const {
        const double lhs = N.determinant();
        const double gap = T.determinant() - 1.0;
        return lhs >= gap * gap / 4.0 - kBonaFideTol;
    }
};

/// Canonical single-mode forms. PureLoss is ThermalLoss at nbar = 0 and
/// QLimAmplifier is Amplifier at nbar = 0; B1 adds one vacuum noise unit to
/// the momentum quadrature only.
struct CanonicalForm {
    enum class Kind { ThermalLoss, Amplifier, AdditiveNoise, PureLoss, QLimAmplifier, B1, Identity };

    Kind kind = Kind::Identity;
    double eta = 1.0;   // transmissivity (ThermalLoss/PureLoss)
    double g = 1.0;     // gain (Amplifier/QLimAmplifier)
    double nbar = 0.0;  // environmental mean thermal number
    double xi = 0.0;    // additive noise

    static CanonicalForm thermal_loss(double eta, double nbar) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("thermal_loss: eta must be in [0,1]");
        if (!(nbar >= 0.0)) throw std::invalid_argument("thermal_loss: nbar must be >= 0");
        CanonicalForm f; f.kind = Kind::ThermalLoss; f.eta = eta; f.nbar = nbar; return f;
    }
    static CanonicalForm pure_loss(double eta) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("pure_loss: eta must be in [0,1]");
        CanonicalForm f; f.kind = Kind::PureLoss; f.eta = eta; return f;
    }
    static CanonicalForm amplifier(double g, double nbar) {
        if (!(g > 1.0)) throw std::invalid_argument("amplifier: gain must be > 1");
        if (!(nbar >= 0.0)) throw std::invalid_argument("amplifier: nbar must be >= 0");
        CanonicalForm f; f.kind = Kind::Amplifier; f.g = g; f.nbar = nbar; return f;
    }
    static CanonicalForm qlim_amplifier(double g) {
        if (!(g > 1.0)) throw std::invalid_argument("qlim_amplifier: gain must be > 1");
        CanonicalForm f; f.kind = Kind::QLimAmplifier; f.g = g; return f;
    }
    static CanonicalForm additive_noise(double xi) {
        if (!(xi >= 0.0)) throw std::invalid_argument("additive_noise: xi must be >= 0");
        CanonicalForm f; f.kind = Kind::AdditiveNoise; f.xi = xi; return f;
    }
    static CanonicalForm b1() { CanonicalForm f; f.kind = Kind::B1; return f; }
    static CanonicalForm identity() { return CanonicalForm{}; }

    /// Effective (eta, nu) of V -> eta V + nu I; B1 has no such reduction.
    std::pair<double, double> eta_nu() const {
        switch (kind) {
            case Kind::ThermalLoss:  return {eta, (1.0 - eta) * (nbar + 0.5)};
            case Kind::PureLoss:     return {eta, (1.0 - eta) * 0.5};
            case Kind::Amplifier:    return {g, (g - 1.0) * (nbar + 0.5)};
            case Kind::QLimAmplifier:return {g, (g - 1.0) * 0.5};
            case Kind::AdditiveNoise:return {1.0, xi};
            case Kind::Identity:     return {1.0, 0.0};
            case Kind::B1:           throw std::invalid_argument("eta_nu: B1 is not of the eta/nu form");
        }
        throw std::logic_error("eta_nu: unreachable");
    }

    std::string name() const {
        switch (kind) {
            case Kind::ThermalLoss:  return "thermal-loss";
            case Kind::Amplifier:    return "amplifier";
            case Kind::AdditiveNoise:return "additive-noise";
            case Kind::PureLoss:     return "pure-loss";
            case Kind::QLimAmplifier:return "qlim-amplifier";
            case Kind::B1:           return "b1";
            case Kind::Identity:     return "identity";
        }
        return "?";
    }
};

/// Qubit channel parameter sets.
struct DVChannelSpec {
    enum class Kind { Pauli, Depolarizing, Dephasing, Erasure, AmplitudeDamping };

    Kind kind = Kind::Dephasing;
    std::array<double, 4> pauli{1.0, 0.0, 0.0, 0.0};
    double p = 0.0;

    static DVChannelSpec pauli_channel(double p0, double p1, double p2, double p3) {
        for (double v : {p0, p1, p2, p3})
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("pauli_channel: probabilities must be in [0,1]");
        if (std::abs(p0 + p1 + p2 + p3 - 1.0) > 1e-12)
            throw std::invalid_argument("pauli_channel: probabilities must sum to 1 within 1e-12");
        DVChannelSpec s; s.kind = Kind::Pauli; s.pauli = {p0, p1, p2, p3}; return s;
    }
    static DVChannelSpec depolarizing(double p) { return simple(Kind::Depolarizing, p); }
    static DVChannelSpec dephasing(double p) { return simple(Kind::Dephasing, p); }
    static DVChannelSpec erasure(double p) { return simple(Kind::Erasure, p); }
    static DVChannelSpec amplitude_damping(double p) { return simple(Kind::AmplitudeDamping, p); }

    /// Bell-diagonal representation of the depolarizing channel:
    /// (1 - 3p/4, p/4, p/4, p/4).
    DVChannelSpec as_pauli() const {
        switch (kind) {
            case Kind::Pauli: return *this;
            case Kind::Depolarizing: return pauli_channel(1.0 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p);
            case Kind::Dephasing: return pauli_channel(1.0 - p, 0.0, 0.0, p);
            default:
                throw std::invalid_argument("as_pauli: channel has no Pauli representation");
        }
    }

    std::string name() const {
        switch (kind) {
            case Kind::Pauli:            return "pauli";
            case Kind::Depolarizing:     return "depolarizing";
            case Kind::Dephasing:        return "dephasing";
            case Kind::Erasure:          return "erasure";
            case Kind::AmplitudeDamping: return "amplitude-damping";
        }
        return "?";
    }

private:
    static DVChannelSpec simple(Kind k, double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("DVChannelSpec: probability must be in [0,1]");
        DVChannelSpec s; s.kind = k; s.p = p; return s;
    }
};

/// (T, N, d) of a canonical form: T = sqrt(eta) I, N = nu I, d = 0 for the
/// eta/nu forms; B1 has T = I, N = diag(0, 1).
inline GaussianChannelSpec to_spec(const CanonicalForm& form) {
    if (form.kind == CanonicalForm::Kind::B1) {
        Eigen::Matrix2d n = Eigen::Matrix2d::Zero();
        n(1, 1) = 1.0;
        return GaussianChannelSpec(Eigen::Matrix2d::Identity(), n, Eigen::Vector2d::Zero());
    }
    const auto [eta, nu] = form.eta_nu();
    return GaussianChannelSpec(std::sqrt(eta) * Eigen::Matrix2d::Identity(),
                               nu * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
}

/// Applies (T, N, d) to one mode of a state, identity on the others.
/// mode is 0-based.
template <typename Scalar = double>
GaussianStateT<Scalar> apply(const GaussianChannelSpec& spec, const GaussianStateT<Scalar>& state, int mode) {
    const int n = state.nmodes();
    if (mode < 0 || mode >= n) throw std::invalid_argument("apply: mode index out of range");

    MatrixX<Scalar> s = MatrixX<Scalar>::Identity(2 * n, 2 * n);
    s.template block<2, 2>(2 * mode, 2 * mode) = spec.T.cast<Scalar>();
    MatrixX<Scalar> noise = MatrixX<Scalar>::Zero(2 * n, 2 * n);
    noise.template block<2, 2>(2 * mode, 2 * mode) = spec.N.cast<Scalar>();

    MatrixX<Scalar> v = s * state.cov().mat() * s.transpose() + noise;
    VectorX<Scalar> mean = s * state.mean();
    mean.template segment<2>(2 * mode) += spec.d.cast<Scalar>();

    try {
        return GaussianStateT<Scalar>(std::move(mean), CovMatrixT<Scalar>(std::move(v)));
    } catch (const std::invalid_argument& e) {
        throw internal_consistency_error(std::string("apply: output state invalid: ") + e.what());
    }
}

/// Quasi-Choi state at energy mu: the canonical form applied to the second
/// mode of a TMSV with parameter mu.
template <typename Scalar = double>
GaussianStateT<Scalar> quasi_choi(const CanonicalForm& form, Scalar mu) {
    return apply(to_spec(form), make_tmsv<Scalar>(mu), 1);
}

/// Structural flags of a canonical form.
struct ChannelChecks {
    bool bona_fide = false;
    bool entanglement_breaking = false;  // thermal loss with nbar >= eta/(1-eta)
    bool zero_bound_region = false;      // parameters where the two-way bound vanishes
    bool tele_covariant = false;
    bool uniform_convergence = false;    // rank(N) == 2
};

inline ChannelChecks channel_checks(const CanonicalForm& form) {
    ChannelChecks out;
    const GaussianChannelSpec spec = to_spec(form);
    out.bona_fide = spec.bona_fide();
    out.tele_covariant = true;  // every Gaussian form commutes with displacements

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(spec.N, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, std::abs(es.eigenvalues().maxCoeff()));
    int rank = 0;
    for (int i = 0; i < 2; ++i)
        if (es.eigenvalues()[i] > 1e-12 * scale) ++rank;
    out.uniform_convergence = (rank == 2);

    using K = CanonicalForm::Kind;
    switch (form.kind) {
        case K::ThermalLoss:
            if (form.eta < 1.0 && form.nbar >= form.eta / (1.0 - form.eta)) {
                out.entanglement_breaking = true;
                out.zero_bound_region = true;
            }
            break;
        case K::Amplifier:
            // zero-capacity threshold nbar >= 1/(g-1); not asserted to be
            // entanglement breaking
            if (form.nbar >= 1.0 / (form.g - 1.0)) out.zero_bound_region = true;
            break;
        case K::AdditiveNoise:
            if (form.xi >= 1.0) out.zero_bound_region = true;
            break;
        default:
            break;
    }
    return out;
}

} // namespace qcb

#endif // QCB_CHANNELS_HPP
