#ifndef QCB_TESTS_SUPPORT_HPP
#define QCB_TESTS_SUPPORT_HPP

#include <random>

#include "qcb/symplectic.hpp"

// Shared generators for the property-style tests. Seeds are fixed so failures
// are reproducible.

namespace qcb_test {

/// Random strictly-physical CM with the smallest symplectic eigenvalue placed
/// at nu_min exactly (symplectic spectrum scales linearly under V -> c V).
inline qcb::CovMatrix random_physical_cm(std::mt19937& rng, int nmodes, double nu_min) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = 2 * nmodes;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    Eigen::MatrixXd v0 = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
    // scale so the smallest symplectic eigenvalue is nu_min
    qcb::CovMatrix cm0(v0);
    const auto nus = [&] {
        Eigen::MatrixXd ov = qcb::omega<double>(nmodes) * v0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(ov, false);
        double lo = 1e300;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            lo = std::min(lo, std::abs(es.eigenvalues()[i]));
        return lo;
    }();
    return qcb::CovMatrix((nu_min / nus) * v0);
}

inline qcb::GaussianState random_physical_state(std::mt19937& rng, int nmodes, double nu_min,
                                                double mean_scale = 0.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    qcb::CovMatrix cm = random_physical_cm(rng, nmodes, nu_min);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(2 * nmodes);
    for (int i = 0; i < mean.size(); ++i) mean[i] = mean_scale * gauss(rng);
    return qcb::GaussianState(std::move(mean), std::move(cm));
}

} // namespace qcb_test

#endif // QCB_TESTS_SUPPORT_HPP
