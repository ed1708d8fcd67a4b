#ifndef QCB_ENTROPY_HPP
#define QCB_ENTROPY_HPP

#include <cmath>
#include <stdexcept>

namespace qcb {

/// Scalar entropic functions, base-2 throughout.
///
/// h(x) = (x+1) log2(x+1) - x log2 x          for x >= 0, h(0) = 0
/// s(x) = (x+1/2) log2(x+1/2) - (x-1/2) log2(x-1/2)   for x >= 1/2, s(1/2) = 0
/// H2(p) = -p log2 p - (1-p) log2(1-p)        for p in [0,1], 0 at endpoints
///
/// h is the von Neumann entropy of a thermal state with mean photon number x;
/// s(x) = h(x - 1/2) expressed in the variance parameter x = nbar + 1/2.
/// Endpoint limits are returned exactly instead of evaluating 0*log 0.

template <typename Scalar = double>
Scalar h_entropy(Scalar x) {
    if (!(x >= Scalar(0)))
        throw std::invalid_argument("h_entropy: argument must be >= 0");
    if (x == Scalar(0)) return Scalar(0);
    const Scalar ln2 = std::log(Scalar(2));
    if (x > Scalar(1)) {
        // (x+1)log2(x+1) - x log2 x = log2(x+1) + x log2(1 + 1/x); cancellation-free
        return std::log2(x + 1) + x * std::log1p(Scalar(1) / x) / ln2;
    }
    return (x + 1) * std::log2(x + 1) - x * std::log2(x);
}

template <typename Scalar = double>
Scalar s_entropy(Scalar x) {
    if (!(x >= Scalar(0.5)))
        throw std::invalid_argument("s_entropy: argument must be >= 1/2");
    if (x == Scalar(0.5)) return Scalar(0);
    const Scalar ln2 = std::log(Scalar(2));
    const Scalar a = x + Scalar(0.5), b = x - Scalar(0.5);
    if (b > Scalar(1))
        return std::log2(a) + b * std::log1p(Scalar(1) / b) / ln2;
    return a * std::log2(a) - b * std::log2(b);
}

template <typename Scalar = double>
Scalar binary_entropy(Scalar p) {
    if (!(p >= Scalar(0) && p <= Scalar(1)))
        throw std::invalid_argument("binary_entropy: argument must be in [0,1]");
    if (p == Scalar(0) || p == Scalar(1)) return Scalar(0);
    const Scalar ln2 = std::log(Scalar(2));
    return -p * std::log2(p) - (1 - p) * std::log1p(-p) / ln2;
}

} // namespace qcb

#endif // QCB_ENTROPY_HPP
