#ifndef QCB_ERRORS_HPP
#define QCB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcb {

/// A state sits on (or within tolerance of) the pure-state boundary where the
/// Gibbs-matrix construction is singular.
class singular_state_error : public std::domain_error {
public:
    explicit singular_state_error(const std::string& what) : std::domain_error(what) {}
};

/// The finite-resource simulation is singular at quantum-limited channel
/// parameters; callers should switch to pure_loss_resource().
class quantum_limited_singularity : public singular_state_error {
public:
    explicit quantum_limited_singularity(const std::string& what) : singular_state_error(what) {}
};

/// A numerical procedure failed (non-diagonalizable input, residue above
/// tolerance, radicand out of range).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Truncated Fock expansion leaves too much tail mass at the requested cutoff.
class cutoff_too_small_error : public std::runtime_error {
public:
    explicit cutoff_too_small_error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation produced output violating its own postcondition.
class internal_consistency_error : public std::runtime_error {
public:
    explicit internal_consistency_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qcb

#endif // QCB_ERRORS_HPP
