#ifndef QCB_GAUSSIAN_ENTROPY_HPP
#define QCB_GAUSSIAN_ENTROPY_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qcb/entropy.hpp"
#include "qcb/errors.hpp"
#include "qcb/symplectic.hpp"

// Entropic functionals of Gaussian states, built on the Gibbs representation:
// the relative entropy of two Gaussian states is
//
//   S(rho1 || rho2) = -Sigma(V1, V1) + Sigma(V1, V2),
//   Sigma(V1, V2) = [ln det(V2 + i*Omega/2) + tr(V1 G2) + delta^T G2 delta] / (2 ln 2),
//   G2 = 2i*Omega acoth(2i V2 Omega),  delta = x1 - x2.
//
// G2 is evaluated through the complex eigendecomposition of M = 2i V Omega
// (generically diagonalizable, real spectrum +/- 2 nu_k for physical V) with
// the principal branch acoth(z) = ln((z+1)/(z-1)) / 2. This avoids the
// Williamson symplectic matrix entirely; only the spectrum is ever needed.
//
// acoth diverges at nu = 1/2, so states within 1e-9 of the pure boundary are
// rejected; callers needing quasi-pure states must regularize first (e.g.
// blend with 1e-6 thermal noise).

namespace qcb {

inline constexpr double kGibbsResidueTol = 1e-9;
inline constexpr double kNegClampTol = 1e-9;

namespace detail {

template <typename Scalar>
void require_strictly_physical(const CovMatrixT<Scalar>& cm, const char* who) {
    const auto nus = symplectic_eigenvalues(cm);
    for (const Scalar nu : nus) {
        if (nu - Scalar(0.5) < Scalar(kPureGuardBand))
            throw singular_state_error(std::string(who) +
                                       ": symplectic eigenvalue within 1e-9 of 1/2 (pure-state singularity)");
    }
}

} // namespace detail

/// Gibbs matrix G = 2i*Omega acoth(2i V Omega) of a strictly physical CM.
/// The result is real symmetric; imaginary and asymmetry residues above 1e-9
/// raise numeric_error.
template <typename Scalar>
MatrixX<Scalar> gibbs_matrix(const CovMatrixT<Scalar>& cm) {
    using Cplx = std::complex<Scalar>;
    using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;

    detail::require_strictly_physical(cm, "gibbs_matrix");

    const int n = cm.nmodes();
    const CMat om = omega<Scalar>(n).template cast<Cplx>();
    const CMat m = Cplx(0, 2) * cm.mat().template cast<Cplx>() * om;

    Eigen::ComplexEigenSolver<CMat> es(m, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success)
        throw numeric_error("gibbs_matrix: eigendecomposition of 2iV*Omega failed");

    Eigen::Matrix<Cplx, Eigen::Dynamic, 1> f(2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        const Cplx z = es.eigenvalues()[i];
        // principal branch acoth(z) = ln((z+1)/(z-1)) / 2, singular at z = +/-1
        if (std::abs(std::abs(z) - Scalar(1)) < Scalar(2 * kPureGuardBand))
            throw singular_state_error("gibbs_matrix: spectrum touches the acoth branch points");
        f[i] = std::log((z + Cplx(1)) / (z - Cplx(1))) / Cplx(2);
    }

    const CMat w = es.eigenvectors() * f.asDiagonal() *
                   es.eigenvectors().partialPivLu().inverse();
    const CMat g = Cplx(0, 2) * om * w;

    if (g.imag().template lpNorm<Eigen::Infinity>() > Scalar(kGibbsResidueTol))
        throw numeric_error("gibbs_matrix: imaginary residue exceeds 1e-9");
    MatrixX<Scalar> gr = g.real();
    if ((gr - gr.transpose()).template lpNorm<Eigen::Infinity>() > Scalar(kGibbsResidueTol))
        throw numeric_error("gibbs_matrix: asymmetry residue exceeds 1e-9");
    return ((gr + gr.transpose()) / Scalar(2)).eval();
}

/// Sigma(V1, V2) with mean offset delta = x1 - x2 (zero in the two-argument
/// overload). V2 must be strictly physical; V1 physical with matching modes.
template <typename Scalar>
Scalar sigma_term(const CovMatrixT<Scalar>& v1, const CovMatrixT<Scalar>& v2,
                  const VectorX<Scalar>& delta) {
    using Cplx = std::complex<Scalar>;
    using CMat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;

    if (v1.dim() != v2.dim())
        throw std::invalid_argument("sigma_term: dimension mismatch");
    if (delta.size() != v1.dim())
        throw std::invalid_argument("sigma_term: delta length must match CM dimension");
    if (!is_physical(v1))
        throw std::domain_error("sigma_term: first covariance matrix is not physical");

    const MatrixX<Scalar> g2 = gibbs_matrix(v2);  // checks strict physicality of v2

    // ln det(V2 + i*Omega/2): the matrix is Hermitian PSD, so the log-det is a
    // real sum over its eigenvalues (no branch ambiguity, zero imaginary residue).
    const int n = v2.nmodes();
    CMat herm = v2.mat().template cast<Cplx>() +
                Cplx(0, Scalar(0.5)) * omega<Scalar>(n).template cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_error("sigma_term: eigenvalue computation failed");
    Scalar logdet = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const Scalar ev = es.eigenvalues()[i];
        if (!(ev > Scalar(0)))
            throw singular_state_error("sigma_term: det(V2 + i*Omega/2) is singular (pure mode)");
        logdet += std::log(ev);
    }

    const Scalar tr = (v1.mat() * g2).trace();
    const Scalar quad = delta.dot(g2 * delta);
    return (logdet + tr + quad) / (Scalar(2) * std::log(Scalar(2)));
}

template <typename Scalar>
Scalar sigma_term(const CovMatrixT<Scalar>& v1, const CovMatrixT<Scalar>& v2) {
    return sigma_term(v1, v2, VectorX<Scalar>::Zero(v1.dim()).eval());
}

template <typename Scalar>
Scalar sigma_term(const GaussianStateT<Scalar>& rho1, const GaussianStateT<Scalar>& rho2) {
    return sigma_term(rho1.cov(), rho2.cov(), (rho1.mean() - rho2.mean()).eval());
}

/// Relative entropy S(rho1 || rho2) in bits, clamped to 0 when roundoff makes
/// it negative within 1e-9.
template <typename Scalar>
Scalar relative_entropy(const GaussianStateT<Scalar>& rho1, const GaussianStateT<Scalar>& rho2) {
    if (rho1.nmodes() != rho2.nmodes())
        throw std::invalid_argument("relative_entropy: mode count mismatch");
    const VectorX<Scalar> delta = rho1.mean() - rho2.mean();
    const Scalar value = -sigma_term(rho1.cov(), rho1.cov()) + sigma_term(rho1.cov(), rho2.cov(), delta);
    if (value < Scalar(0)) {
        if (value < Scalar(-kNegClampTol))
            throw numeric_error("relative_entropy: negative value beyond clamp tolerance");
        return Scalar(0);
    }
    return value;
}

/// Von Neumann entropy in bits: sum of h(nu_k - 1/2) over the symplectic
/// spectrum, with pure modes contributing 0.
template <typename Scalar>
Scalar von_neumann_entropy(const CovMatrixT<Scalar>& cm) {
    Scalar total = 0;
    for (const Scalar nu : symplectic_eigenvalues(cm)) {
        const Scalar x = nu - Scalar(0.5);
        total += h_entropy(std::max(Scalar(0), x));
    }
    return total;
}

/// Fidelity between a TMSV of parameter mu_in and its image under the
/// finite-energy teleportation channel of resource parameter mu_res:
///
///   F = [1 - 4 mt (sqrt(4 mu^2 - 1) + mt - 2 mu (1 + 2 mt xi))]^(-1/4),
///   xi = 2 mu - sqrt(4 mu^2 - 1).
///
/// The radicand equals (1 + 2 mt xi)^2 exactly (substitute xi^2 = 4 mu xi - 1)
/// and is evaluated in that cancellation-free form; it is >= 1 for all valid
/// inputs, and anything below 1 - 1e-12 signals formula misuse.
template <typename Scalar = double>
Scalar teleport_fidelity(Scalar mu_res, Scalar mu_in) {
    if (!(mu_res > Scalar(0.5)))
        throw std::invalid_argument("teleport_fidelity: mu_res must be > 1/2");
    if (!(mu_in >= Scalar(0.5)))
        throw std::invalid_argument("teleport_fidelity: mu_in must be >= 1/2");
    // xi in the overflow-safe reciprocal form 1 / (2 mu (1 + sqrt(1 - 1/(4 mu^2))))
    const Scalar xi = Scalar(1) / (Scalar(2) * mu_res *
                                   (Scalar(1) + std::sqrt(Scalar(1) - Scalar(1) / (Scalar(4) * mu_res * mu_res))));
    const Scalar a = mu_in * xi;
    const Scalar radicand = Scalar(1) + Scalar(4) * a * (Scalar(1) + a);
    if (radicand < Scalar(1) - Scalar(1e-12))
        throw numeric_error("teleport_fidelity: radicand below 1 (formula misuse)");
    return std::pow(radicand, Scalar(-0.25));
}

/// 1 - teleport_fidelity(mu_res, mu_in) at full relative precision (the direct
/// subtraction loses everything once F is within an ulp of 1, i.e. for
/// mu_res beyond ~1e15 at laboratory input energies).
template <typename Scalar = double>
Scalar teleport_infidelity(Scalar mu_res, Scalar mu_in) {
    if (!(mu_res > Scalar(0.5)))
        throw std::invalid_argument("teleport_infidelity: mu_res must be > 1/2");
    if (!(mu_in >= Scalar(0.5)))
        throw std::invalid_argument("teleport_infidelity: mu_in must be >= 1/2");
    const Scalar xi = Scalar(1) / (Scalar(2) * mu_res *
                                   (Scalar(1) + std::sqrt(Scalar(1) - Scalar(1) / (Scalar(4) * mu_res * mu_res))));
    // 1 - (1 + 2 a)^(-1/2) without cancellation
    return -std::expm1(Scalar(-0.5) * std::log1p(Scalar(2) * mu_in * xi));
}

} // namespace qcb

#endif // QCB_GAUSSIAN_ENTROPY_HPP
