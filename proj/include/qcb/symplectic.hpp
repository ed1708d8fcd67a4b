#ifndef QCB_SYMPLECTIC_HPP
#define QCB_SYMPLECTIC_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qcb/entropy.hpp"
#include "qcb/errors.hpp"

// Covariance-matrix algebra for bosonic Gaussian states.
//
// Conventions (fixed project-wide):
//   * [q, p] = i, vacuum variance 1/2, dimensionless quadrature units;
//   * mode-interleaved quadrature ordering (q1, p1, q2, p2, ...), so the
//     symplectic form is a direct sum of 2x2 blocks [[0,1],[-1,0]];
//   * a CM V is physical iff V + i*Omega/2 >= 0 (checked to -1e-10 on the
//     minimum eigenvalue, absorbing roundoff from composed channels).

namespace qcb {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kSymmetryRelTol  = 1e-12;  // CM symmetry tolerance (relative)
inline constexpr double kPhysicalityTol  = 1e-10;  // min eig of V + i*Omega/2
inline constexpr double kPureGuardBand   = 1e-9;   // distance from nu = 1/2 treated as pure

/// Symplectic form in the interleaved ordering: Omega = diag([[0,1],[-1,0]], ...).
/// Satisfies Omega^2 = -I and Omega^T = -Omega.
template <typename Scalar = double>
MatrixX<Scalar> omega(int nmodes) {
    if (nmodes < 1) throw std::invalid_argument("omega: nmodes must be >= 1");
    MatrixX<Scalar> w = MatrixX<Scalar>::Zero(2 * nmodes, 2 * nmodes);
    for (int k = 0; k < nmodes; ++k) {
        w(2 * k, 2 * k + 1) = Scalar(1);
        w(2 * k + 1, 2 * k) = Scalar(-1);
    }
    return w;
}

/// Permutation P taking the interleaved layout (q1,p1,...,qn,pn) to the
/// blocked layout (q1..qn, p1..pn) used by some texts: x_blocked = P x.
/// Under it the symplectic form becomes [[0, I_n], [-I_n, 0]]; all module
/// invariants are ordering-independent.
template <typename Scalar = double>
MatrixX<Scalar> block_ordering_permutation(int nmodes) {
    if (nmodes < 1) throw std::invalid_argument("block_ordering_permutation: nmodes must be >= 1");
    MatrixX<Scalar> p = MatrixX<Scalar>::Zero(2 * nmodes, 2 * nmodes);
    for (int k = 0; k < nmodes; ++k) {
        p(k, 2 * k) = Scalar(1);           // q_k
        p(nmodes + k, 2 * k + 1) = Scalar(1);  // p_k
    }
    return p;
}

/// Real symmetric 2n x 2n covariance matrix. Symmetry is enforced at
/// construction; physicality is queried, not enforced (unphysical matrices are
/// legal inputs to is_physical and boundary cases of the symplectic spectrum).
template <typename Scalar = double>
class CovMatrixT {
public:
    explicit CovMatrixT(MatrixX<Scalar> entries) : m_(std::move(entries)) {
        if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0)
            throw std::invalid_argument("CovMatrix: entries must be square of even dimension >= 2");
        const Scalar scale = std::max(Scalar(1), m_.template lpNorm<Eigen::Infinity>());
        if ((m_ - m_.transpose()).template lpNorm<Eigen::Infinity>() > Scalar(kSymmetryRelTol) * scale)
            throw std::invalid_argument("CovMatrix: entries must be symmetric within 1e-12 relative tolerance");
        m_ = ((m_ + m_.transpose()) / Scalar(2)).eval();
    }

    const MatrixX<Scalar>& mat() const { return m_; }
    int nmodes() const { return static_cast<int>(m_.rows()) / 2; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    MatrixX<Scalar> m_;
};

using CovMatrix = CovMatrixT<double>;

/// True iff the minimum eigenvalue of the Hermitian matrix V + i*Omega/2 is
/// >= -1e-10 (the bona-fide uncertainty relation).
template <typename Scalar>
bool is_physical(const CovMatrixT<Scalar>& cm) {
    using Cplx = std::complex<Scalar>;
    const int n = cm.nmodes();
    Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic> herm =
        cm.mat().template cast<Cplx>() + Cplx(0, Scalar(0.5)) * omega<Scalar>(n).template cast<Cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>> es(herm,
                                                                                          Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw numeric_error("is_physical: eigenvalue computation failed");
    return es.eigenvalues().minCoeff() >= Scalar(-kPhysicalityTol);
}

/// Symplectic spectrum: the n distinct moduli of the eigenvalues of i*Omega*V,
/// descending. Physical CMs have every value >= 1/2 (within 1e-9).
template <typename Scalar>
std::vector<Scalar> symplectic_eigenvalues(const CovMatrixT<Scalar>& cm) {
    if (!is_physical(cm))
        throw std::domain_error("symplectic_eigenvalues: covariance matrix is not physical");
    const int n = cm.nmodes();
    MatrixX<Scalar> ov = omega<Scalar>(n) * cm.mat();
    Eigen::EigenSolver<MatrixX<Scalar>> es(ov, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw numeric_error("symplectic_eigenvalues: eigenvalue computation failed");
    std::vector<Scalar> mods(2 * n);
    for (int i = 0; i < 2 * n; ++i) mods[i] = std::abs(es.eigenvalues()[i]);
    std::sort(mods.begin(), mods.end(), std::greater<Scalar>());
    // eigenvalues of Omega*V come in +/- i*nu pairs; keep one per pair
    std::vector<Scalar> nus(n);
    for (int k = 0; k < n; ++k) nus[k] = mods[2 * k];
    return nus;
}

/// Gaussian state: mean vector plus a covariance matrix that must be physical.
template <typename Scalar = double>
class GaussianStateT {
public:
    GaussianStateT(VectorX<Scalar> mean, CovMatrixT<Scalar> cov)
        : mean_(std::move(mean)), cov_(std::move(cov)) {
        validate();
    }

    explicit GaussianStateT(CovMatrixT<Scalar> cov)
        : mean_(VectorX<Scalar>::Zero(cov.dim())), cov_(std::move(cov)) {
        validate();
    }

    const VectorX<Scalar>& mean() const { return mean_; }
    const CovMatrixT<Scalar>& cov() const { return cov_; }
    int nmodes() const { return cov_.nmodes(); }

private:
    void validate() const {
        if (mean_.size() != cov_.dim())
            throw std::invalid_argument("GaussianState: mean length must match CM dimension");
        if (!mean_.allFinite())
            throw std::invalid_argument("GaussianState: mean must be finite");
        if (!is_physical(cov_))
            throw std::invalid_argument("GaussianState: covariance matrix is not physical");
    }

    VectorX<Scalar> mean_;
    CovMatrixT<Scalar> cov_;
};

using GaussianState = GaussianStateT<double>;

/// Two-mode squeezed vacuum with variance parameter mu = nbar + 1/2 >= 1/2.
/// CM has diagonal blocks mu*I and off-diagonal blocks +/- sqrt(mu^2 - 1/4) Z.
template <typename Scalar = double>
GaussianStateT<Scalar> make_tmsv(Scalar mu) {
    if (!(mu >= Scalar(0.5)))
        throw std::invalid_argument("make_tmsv: mu must be >= 1/2");
    const Scalar c = std::sqrt(std::max(Scalar(0), mu * mu - Scalar(0.25)));
    MatrixX<Scalar> v = MatrixX<Scalar>::Zero(4, 4);
    v.diagonal().setConstant(mu);
    v(0, 2) = v(2, 0) = c;
    v(1, 3) = v(3, 1) = -c;
    return GaussianStateT<Scalar>(CovMatrixT<Scalar>(std::move(v)));
}

/// Single-mode thermal state with mean photon number nbar >= 0: CM (nbar+1/2) I.
template <typename Scalar = double>
GaussianStateT<Scalar> make_thermal(Scalar nbar) {
    if (!(nbar >= Scalar(0)))
        throw std::invalid_argument("make_thermal: nbar must be >= 0");
    MatrixX<Scalar> v = (nbar + Scalar(0.5)) * MatrixX<Scalar>::Identity(2, 2);
    return GaussianStateT<Scalar>(CovMatrixT<Scalar>(std::move(v)));
}

/// Total mean photon number over all modes: tr(V)/2 - n/2 + |mean|^2/2.
template <typename Scalar>
Scalar mean_photon_number(const GaussianStateT<Scalar>& state) {
    const Scalar n = Scalar(state.nmodes());
    return state.cov().mat().trace() / Scalar(2) - n / Scalar(2) + state.mean().squaredNorm() / Scalar(2);
}

} // namespace qcb

#endif // QCB_SYMPLECTIC_HPP
