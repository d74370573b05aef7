#pragma once

#include <functional>
#include <vector>

#include "qrec/matrix.hpp"

namespace qrec {

/// Spectral decomposition of a Hermitian matrix.  Column k of `vectors`
/// is the orthonormal eigenvector paired with `values[k]`; values are
/// sorted ascending.
struct EigenSystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations.  The input is
/// symmetrized as (H + H^dagger)/2 before solving; inputs whose hermiticity
/// error exceeds 1e-10 * max|H| are rejected.  Sweeps run until the
/// off-diagonal Frobenius norm drops below 1e-12 * ||H||_F, capped at 100
/// sweeps (ConvergenceError beyond that, reporting the residual).
EigenSystem herm_eig(const ComplexMatrix& h);

/// Eigenvalues only (ascending); same solver without accumulating vectors.
std::vector<double> herm_eigenvalues(const ComplexMatrix& h);

/// Spectral matrix function V f(Lambda) V^dagger.
ComplexMatrix func_of_hermitian(const ComplexMatrix& h, const std::function<Complex(double)>& f);

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything below -1e-10
/// is a DomainError (matrix not positive semidefinite).
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

/// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
double trace_norm_hermitian(const ComplexMatrix& m);

} // namespace qrec
