#pragma once

#include <string>
#include <vector>

#include "qrec/matrix.hpp"
#include "qrec/rng.hpp"

namespace qrec {

/// Validated quantum state.  Qubit 0 is the leftmost (most significant)
/// tensor factor throughout; subsystem A of a bipartition is always the
/// leading block of qubits.
struct DensityMatrix {
    ComplexMatrix mat;
    int n_qubits = 0;
};

struct UnitaryOp {
    ComplexMatrix mat;
    int n_qubits = 0;
    std::string tag; // "random", "local-product", "cnot", or empty
};

/// Wraps a matrix as a density operator, checking dimension (power of two),
/// hermiticity (1e-10) and unit trace (1e-10).  Positivity is checked
/// separately (it costs an eigensolve).
DensityMatrix make_density(ComplexMatrix mat);

/// Full invariant check including eigenvalues >= -1e-10.
void check_density_psd(const DensityMatrix& rho);

/// Wraps a matrix as a unitary, checking U^dagger U = 1 to 1e-9.
UnitaryOp make_unitary(ComplexMatrix mat, std::string tag = {});

/// Normalized random state vector (2^n column); amplitudes are independent
/// standard complex Gaussians before normalization, so the result is
/// Haar-uniform.
ComplexMatrix random_state_vector(int n_qubits, Rng& rng);

DensityMatrix random_pure_state(int n_qubits, Rng& rng);

/// Bures-measure random mixed state: rho = R R^dagger / Tr[R R^dagger]
/// with R = (1 + U) A, U a fresh random unitary and A a Ginibre matrix.
DensityMatrix random_mixed_state_bures(int n_qubits, Rng& rng);

/// exp(G) with G = scale * (M - M^dagger)/2 for a Ginibre M, computed
/// spectrally from the Hermitian generator -iG.
UnitaryOp random_unitary(int n_qubits, Rng& rng, double scale = 1.0);

/// Reduced state over `keep` (ordered qubit indices; output qubit k is
/// input qubit keep[k]).  Keeping every qubit in natural order returns the
/// input unchanged.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Same reduction applied directly to a raw Hermitian matrix.
ComplexMatrix partial_trace_matrix(const ComplexMatrix& mat, int n_qubits,
                                   const std::vector<int>& keep);

/// Reduced density matrix of a pure state given as a vector.
ComplexMatrix pure_state_reduced(const ComplexMatrix& state_vec, int n_qubits,
                                 const std::vector<int>& keep);

/// Partial transpose over subsystem 'A' (leading `split` qubits) or 'B'.
/// Result is Hermitian with unit trace but not necessarily positive.
ComplexMatrix partial_transpose(const DensityMatrix& rho, char subsystem, int split);

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryOp& u);

/// (1-eps)/4 * identity + eps |-><-| (x) |1><1|; separable and discord-free
/// for every eps.
DensityMatrix rho_minus(double eps);

/// (1-eps)/4 * identity + eps |S0><S0| with S0 = (|01> - |10>)/sqrt(2).
DensityMatrix werner_state(double eps);

DensityMatrix singlet_state();
DensityMatrix bell_phi_plus();

/// |0><0| (x) 1 + |1><1| (x) sigma_x, control on qubit 0.
UnitaryOp cnot_gate();

/// Kronecker product of two unitaries, tagged "local-product".
UnitaryOp tensor_product(const UnitaryOp& a, const UnitaryOp& b);

} // namespace qrec
